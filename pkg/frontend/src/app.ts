// Browser wiring: render the pad, drive a session over WebSocket, and
// keep the DOM in sync with PadState. Logic lives in padState.ts; this
// file is intentionally the only one touching the DOM.

import { DEFAULT_KNOBS } from "./frameGen.js"
import { PadState, Transport } from "./padState.js"
import { AlphabetDoc, InboundMsg, parseOutbound } from "./protocol.js"

const TRIGGER_HINTS: Record<string, string> = {
    T0: "space",
    T1: "vowel",
    T2: "join 2",
    T3: "join 3",
    T4: "hidden",
    T5: "123",
    T6: "del",
    T7: "—",
}

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K, cls?: string, text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag)
    if (cls) node.className = cls
    if (text !== undefined) node.textContent = text
    return node
}

function $(id: string): HTMLElement {
    const node = document.getElementById(id)
    if (!node) throw new Error(`missing #${id}`)
    return node
}

class WsTransport implements Transport {
    private ws: WebSocket | null = null

    constructor(
        private url: string,
        private onMessage: (raw: string) => void,
        private onOpen: () => void,
        private onClose: () => void,
    ) {}

    connect(): void {
        this.ws = new WebSocket(this.url)
        this.ws.onopen = () => this.onOpen()
        this.ws.onmessage = (ev) => this.onMessage(String(ev.data))
        this.ws.onclose = () => {
            this.onClose()
            setTimeout(() => this.connect(), 1000)
        }
        this.ws.onerror = () => this.ws?.close()
    }

    send(msg: InboundMsg): void {
        if (this.ws && this.ws.readyState === WebSocket.OPEN) {
            this.ws.send(JSON.stringify(msg))
        }
    }
}

async function boot(): Promise<void> {
    const params = new URLSearchParams(window.location.search)
    const base = params.get("service") ?? "http://127.0.0.1:8000"
    const wsUrl = base.replace(/^http/, "ws") + "/v1/session"

    const res = await fetch(`${base}/v1/alphabet`)
    if (!res.ok) throw new Error(`alphabet fetch failed: ${res.status}`)
    const alphabet = (await res.json()) as AlphabetDoc

    let pad: PadState
    const transport = new WsTransport(
        wsUrl,
        (raw) => {
            pad.handleMessage(parseOutbound(raw))
            render()
        },
        () => {
            pad.handleOpen()
            render()
        },
        () => {
            pad.handleClose()
            render()
        },
    )
    pad = new PadState({
        transport,
        alphabet,
        knobs: { ...DEFAULT_KNOBS },
        fps: 45,
        seed: Date.now() & 0xffff,
    })

    buildPad(alphabet, pad)
    bindKnobs(pad)
    transport.connect()

    let emitTimer: ReturnType<typeof setInterval> | null = null
    const restartEmitter = () => {
        if (emitTimer) clearInterval(emitTimer)
        emitTimer = setInterval(() => pad.tick(), 1000 / pad.fps)
    }
    restartEmitter()
    $("fps").addEventListener("change", restartEmitter)

    let flashUntil = 0
    function render(): void {
        $("buffer").textContent = pad.bufferText || "∅"
        $("mode").textContent = pad.mode
        $("mode").className = `pill mode-${pad.mode}`
        $("phase").textContent = pad.phase
        $("phase").className = `pill phase-${pad.phase}`
        $("delta-active").textContent =
            `δ ${pad.delta}` + (pad.stagedConfig ? " (staged: applies next character)" : "")
        $("delta-active").classList.toggle("staged", pad.stagedConfig !== null)
        $("unit").textContent = pad.scoreUnit()

        const err = $("inline-error")
        err.textContent = pad.inlineError ?? ""
        err.style.display = pad.inlineError ? "block" : "none"

        const bars = $("bars")
        bars.replaceChildren()
        for (const bar of pad.bars()) {
            const row = el("div", "bar-row")
            row.append(el("span", "bar-label", bar.label))
            const track = el("div", "bar-track")
            const fill = el("div", "bar-fill")
            fill.style.width = `${(bar.ratio * 100).toFixed(1)}%`
            if (bar.label === pad.heldLabel) fill.classList.add("held")
            track.append(fill)
            row.append(track)
            row.append(el("span", "bar-score", bar.score.toFixed(1)))
            bars.append(row)
        }

        const flash = $("confirm-flash")
        if (pad.lastConfirmed && pad.lastConfirmed.atMs + 900 > Date.now()) {
            flash.textContent =
                `✓ ${pad.lastConfirmed.label} in ${pad.lastConfirmed.frames} frames`
            flash.classList.add("on")
            flashUntil = pad.lastConfirmed.atMs + 900
            setTimeout(render, 950)
        } else if (Date.now() > flashUntil) {
            flash.classList.remove("on")
        }

        $("log").replaceChildren(
            ...pad.eventLog.slice(-8).reverse().map((line) => el("div", "log-line", line)),
        )
    }

    // expose for quick poking from the devtools console
    ;(window as unknown as { pad: PadState }).pad = pad
    render()
}

function buildPad(alphabet: AlphabetDoc, pad: PadState): void {
    const groups: [string, (c: AlphabetDoc["classes"][number]) => boolean][] = [
        ["Letters", (c) => c.role === "consonant"],
        ["Vowel signs", (c) => c.role === "dependent_vowel"],
        ["Numerals / triggers", (c) => c.role === "numeral"],
    ]
    const host = $("pad")
    for (const [title, match] of groups) {
        const section = el("section", "pad-group")
        section.append(el("h2", undefined, title))
        const grid = el("div", "pad-grid")
        for (const cls of alphabet.classes.filter(match)) {
            const btn = el("button", "key")
            btn.append(el("span", "key-glyph", cls.codepoints))
            btn.append(el("span", "key-label", cls.label))
            if (cls.trigger) {
                const hint = TRIGGER_HINTS[cls.trigger] ?? ""
                btn.append(el("span", "key-badge", `${cls.trigger} ${hint}`))
            }
            btn.addEventListener("pointerdown", () => {
                btn.classList.add("down")
                pad.holdSign(cls.label)
            })
            const release = () => {
                btn.classList.remove("down")
                pad.releaseSign()
            }
            btn.addEventListener("pointerup", release)
            btn.addEventListener("pointerleave", release)
            grid.append(btn)
        }
        section.append(grid)
        host.append(section)
    }
}

function bindKnobs(pad: PadState): void {
    const delta = $("delta") as HTMLInputElement
    delta.addEventListener("change", () => pad.adjust({ delta: Number(delta.value) }))

    const strategy = $("strategy") as HTMLSelectElement
    strategy.addEventListener("change", () => pad.adjust({ strategy: strategy.value }))

    const fps = $("fps") as HTMLInputElement
    fps.addEventListener("change", () => {
        const v = Number(fps.value)
        if (v > 0 && v <= 120) pad.fps = v
    })

    const conf = $("conf-mean") as HTMLInputElement
    conf.addEventListener("change", () => {
        const v = Number(conf.value)
        if (v >= 0 && v <= 1) pad.knobs.confMean = v
    })

    const noise = $("noise") as HTMLInputElement
    noise.addEventListener("change", () => {
        pad.knobs.noise = noise.checked
    })

    $("reset").addEventListener("click", () => pad.sendReset())
}

boot().catch((err) => {
    const banner = document.getElementById("inline-error")
    if (banner) {
        banner.textContent = `console failed to start: ${err}`
        banner.style.display = "block"
    }
})
