// Synthetic detection frames: the console is a simulated signer, so the
// service stays agnostic between a human pad and a real detector.

import type { DetectionMsg, FrameMsg } from "./protocol.js"

export interface NoiseKnobs {
    confMean: number
    confStd: number
    noise: boolean      // off: confidence pinned to confMean, no miss/false
    falseRate: number
    missRate: number
}

export const DEFAULT_KNOBS: NoiseKnobs = {
    confMean: 0.84,
    confStd: 0.05,
    noise: false,
    falseRate: 0.1,
    missRate: 0.02,
}

/** Deterministic 32-bit PRNG (mulberry32); good enough for UI noise. */
export function mulberry32(seed: number): () => number {
    let a = seed >>> 0
    return () => {
        a |= 0
        a = (a + 0x6d2b79f5) | 0
        let t = Math.imul(a ^ (a >>> 15), 1 | a)
        t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296
    }
}

export class FrameGenerator {
    private rng: () => number
    private gaussSpare: number | null = null

    constructor(private allLabels: string[], seed = 1) {
        this.rng = mulberry32(seed)
    }

    private gauss(): number {
        if (this.gaussSpare !== null) {
            const v = this.gaussSpare
            this.gaussSpare = null
            return v
        }
        const u = Math.max(this.rng(), 1e-12)
        const v = this.rng()
        const r = Math.sqrt(-2 * Math.log(u))
        this.gaussSpare = r * Math.sin(2 * Math.PI * v)
        return r * Math.cos(2 * Math.PI * v)
    }

    private bbox(): [number, number, number, number] {
        const jx = (this.rng() - 0.5) * 0.04
        const jy = (this.rng() - 0.5) * 0.04
        return [0.35 + jx, 0.3 + jy, 0.3, 0.35]
    }

    confidence(knobs: NoiseKnobs): number {
        if (!knobs.noise || knobs.confStd === 0) return knobs.confMean
        const c = knobs.confMean + knobs.confStd * this.gauss()
        return Math.min(1, Math.max(0, c))
    }

    /** One frame of the held sign at time t (seconds). */
    frame(label: string, t: number, knobs: NoiseKnobs): FrameMsg {
        const detections: DetectionMsg[] = []
        const missed = knobs.noise && this.rng() < knobs.missRate
        if (!missed) {
            detections.push({ label, conf: this.confidence(knobs), bbox: this.bbox() })
        }
        if (knobs.noise && this.rng() < knobs.falseRate && this.allLabels.length > 0) {
            const other = this.allLabels[Math.floor(this.rng() * this.allLabels.length)]!
            detections.push({
                label: other,
                conf: this.rng() * knobs.confMean,
                bbox: this.bbox(),
            })
        }
        return { type: "frame", t, detections }
    }
}
