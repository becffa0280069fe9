// Wire schema of the streaming service. The console speaks only this.

export interface DetectionMsg {
    label: string
    conf: number
    bbox: [number, number, number, number]
}

export interface FrameMsg {
    type: "frame"
    t: number
    detections: DetectionMsg[]
}

export interface SetConfigMsg {
    type: "set_config"
    delta?: number
    strategy?: string
    decay?: number
}

export interface ResetMsg {
    type: "reset"
}

export type InboundMsg = FrameMsg | SetConfigMsg | ResetMsg

export interface SessionOpenMsg {
    type: "session_open"
    session_id: string
    delta: number
    strategy: string
}

export interface ConfirmedMsg {
    type: "confirmed"
    label: string
    score: number
    frames: number
    t: number
}

export interface ComposeEventMsg {
    type: "compose_event"
    kind: string
    detail: string
    buffer_text: string
    mode: "textual" | "numeral"
}

export interface AccumulatorsMsg {
    type: "accumulators"
    scores: Record<string, number>
}

export interface AckMsg {
    type: "ack"
    staged: boolean
}

export interface ErrorMsg {
    type: "error"
    reason: string
}

export type OutboundMsg =
    | SessionOpenMsg
    | ConfirmedMsg
    | ComposeEventMsg
    | AccumulatorsMsg
    | AckMsg
    | ErrorMsg

const OUTBOUND_TYPES = new Set([
    "session_open", "confirmed", "compose_event", "accumulators", "ack", "error",
])

export function parseOutbound(raw: string): OutboundMsg {
    let doc: unknown
    try {
        doc = JSON.parse(raw)
    } catch {
        throw new Error(`service sent invalid JSON: ${raw.slice(0, 80)}`)
    }
    if (typeof doc !== "object" || doc === null || !("type" in doc)) {
        throw new Error("service message has no type")
    }
    const type = (doc as { type: unknown }).type
    if (typeof type !== "string" || !OUTBOUND_TYPES.has(type)) {
        throw new Error(`unknown service message type ${String(type)}`)
    }
    return doc as OutboundMsg
}

// Alphabet document served by GET /v1/alphabet.

export interface SignClassDoc {
    label: string
    role: "consonant" | "dependent_vowel" | "numeral"
    codepoints: string
    trigger?: string
}

export interface AlphabetDoc {
    ruleset_version: number
    classes: SignClassDoc[]
    numeral_mode_exit_label: string
}

export const STRATEGIES = ["cumulative_confidence", "detection_count"] as const
