// Pad state machine, DOM-free so it can be tested under node.
//
// Owns: the held sign and its frame emission clock, the accumulator
// snapshot, the composed buffer text and mode, active vs staged
// confirmation config, inline validation errors, and the connection
// phase. The UI layer renders this state and forwards user gestures.

import { FrameGenerator, NoiseKnobs } from "./frameGen.js"
import {
    AlphabetDoc,
    ConfirmedMsg,
    InboundMsg,
    OutboundMsg,
    STRATEGIES,
} from "./protocol.js"

export interface Transport {
    send(msg: InboundMsg): void
}

export type Phase = "connecting" | "ready" | "reconnecting"

export interface ConfirmFlash {
    label: string
    score: number
    frames: number
    atMs: number
}

export interface PadOptions {
    transport: Transport
    alphabet: AlphabetDoc
    knobs: NoiseKnobs
    fps: number
    seed?: number
    now?: () => number
}

const EVENT_LOG_LIMIT = 40

export class PadState {
    readonly alphabet: AlphabetDoc
    knobs: NoiseKnobs
    fps: number

    phase: Phase = "connecting"
    heldLabel: string | null = null
    holdStartMs: number | null = null

    scores: Record<string, number> = {}
    bufferText = ""
    mode: "textual" | "numeral" = "textual"

    delta = 0
    strategy = ""
    /** Config sent but not yet in force (badge: "staged until next character"). */
    stagedConfig: { delta?: number; strategy?: string } | null = null

    lastConfirmed: ConfirmFlash | null = null
    eventLog: string[] = []
    inlineError: string | null = null

    private transport: Transport
    private gen: FrameGenerator
    private now: () => number
    private epochMs: number
    private lastT = 0

    constructor(opts: PadOptions) {
        this.transport = opts.transport
        this.alphabet = opts.alphabet
        this.knobs = { ...opts.knobs }
        this.fps = opts.fps
        this.now = opts.now ?? (() => Date.now())
        this.epochMs = this.now()
        this.gen = new FrameGenerator(
            opts.alphabet.classes.map((c) => c.label),
            opts.seed ?? 1,
        )
    }

    // -- connection lifecycle -----------------------------------------

    handleOpen(): void {
        // a (re)connected socket means a fresh server session
        this.phase = "ready"
        this.scores = {}
        this.bufferText = ""
        this.mode = "textual"
        this.stagedConfig = null
        this.lastConfirmed = null
    }

    handleClose(): void {
        this.phase = "reconnecting"
        // emission pauses (tick() checks phase); the held button stays
        // held so the signer can resume after reconnect
    }

    // -- user gestures --------------------------------------------------

    holdSign(label: string): void {
        if (!this.alphabet.classes.some((c) => c.label === label)) {
            this.inlineError = `unknown sign ${label}`
            return
        }
        this.heldLabel = label // at most one held label: replace
        this.holdStartMs = this.now()
    }

    releaseSign(): void {
        this.heldLabel = null
        this.holdStartMs = null
    }

    /**
     * Emit one frame of the held sign. The UI calls this on a timer at
     * `fps`; tests call it directly. No-op when nothing is held or the
     * connection is down.
     */
    tick(): void {
        if (this.phase !== "ready" || this.heldLabel === null) return
        const elapsed = (this.now() - this.epochMs) / 1000
        // timestamps must be monotone for the session even across pauses
        this.lastT = Math.max(elapsed, this.lastT + 1 / this.fps)
        this.transport.send(this.gen.frame(this.heldLabel, this.lastT, this.knobs))
    }

    adjust(change: { delta?: number; strategy?: string }): void {
        this.inlineError = null
        if (change.delta !== undefined) {
            if (!Number.isFinite(change.delta) || change.delta <= 0) {
                this.inlineError = `delta must be > 0 (got ${change.delta})`
                return
            }
        }
        if (change.strategy !== undefined) {
            if (!(STRATEGIES as readonly string[]).includes(change.strategy)) {
                this.inlineError = `unknown strategy ${change.strategy}`
                return
            }
        }
        this.transport.send({ type: "set_config", ...change })
        this.stagedConfig = { ...(this.stagedConfig ?? {}), ...change }
    }

    sendReset(): void {
        this.transport.send({ type: "reset" })
    }

    // -- service messages ------------------------------------------------

    handleMessage(msg: OutboundMsg): void {
        switch (msg.type) {
            case "session_open":
                this.phase = "ready"
                this.delta = msg.delta
                this.strategy = msg.strategy
                break
            case "accumulators":
                this.scores = msg.scores
                break
            case "confirmed":
                this.applyConfirmed(msg)
                break
            case "compose_event":
                // invariant: displayed buffer always equals the latest
                // compose_event buffer_text
                this.bufferText = msg.buffer_text
                this.mode = msg.mode
                this.pushLog(`${msg.kind}: ${msg.detail}`)
                break
            case "ack":
                if (!msg.staged) this.applyStaged()
                break
            case "error":
                this.inlineError = msg.reason
                this.pushLog(`error: ${msg.reason}`)
                break
        }
    }

    private applyConfirmed(msg: ConfirmedMsg): void {
        this.lastConfirmed = {
            label: msg.label,
            score: msg.score,
            frames: msg.frames,
            atMs: this.now(),
        }
        this.pushLog(`confirmed ${msg.label} (score ${msg.score.toFixed(1)}, ${msg.frames} frames)`)
        // a confirmation is an accumulator reset: staged config takes effect
        this.applyStaged()
    }

    private applyStaged(): void {
        if (this.stagedConfig === null) return
        if (this.stagedConfig.delta !== undefined) this.delta = this.stagedConfig.delta
        if (this.stagedConfig.strategy !== undefined) this.strategy = this.stagedConfig.strategy
        this.stagedConfig = null
    }

    private pushLog(line: string): void {
        this.eventLog.push(line)
        if (this.eventLog.length > EVENT_LOG_LIMIT) this.eventLog.shift()
    }

    // -- derived, for rendering -------------------------------------------

    /** Accumulator fill ratios against delta, highest first. */
    bars(limit = 6): { label: string; score: number; ratio: number }[] {
        return Object.entries(this.scores)
            .map(([label, score]) => ({
                label,
                score,
                ratio: this.delta > 0 ? Math.min(1, score / this.delta) : 0,
            }))
            .sort((a, b) => b.score - a.score)
            .slice(0, limit)
    }

    scoreUnit(): string {
        return this.strategy === "detection_count" ? "detections" : "score"
    }
}
