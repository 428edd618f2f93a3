import type { FeatureMeta, GAOverrides, TuneRequest } from "./types.js";

export interface FieldError {
  feature: string;
  message: string;
}

/**
 * Tune-form state, kept free of DOM concerns so the invariants are directly
 * testable: submit stays disabled until at least one feature is enabled and
 * every enabled target sits inside its served range; seasonal-only features
 * cannot be enabled while the period is 1.
 */
export class TuneFormState {
  period = 12;
  length = 120;
  count = 10;
  seed = 0;
  ga: GAOverrides = {};
  private enabled = new Map<string, number>();

  constructor(readonly metadata: FeatureMeta[]) {}

  meta(name: string): FeatureMeta {
    const found = this.metadata.find((m) => m.name === name);
    if (!found) throw new Error(`unknown feature ${name}`);
    return found;
  }

  /** Features that can be toggled for the current period. */
  available(): FeatureMeta[] {
    return this.metadata.filter((m) => !this.isDisabled(m.name));
  }

  isDisabled(name: string): boolean {
    return this.period === 1 && this.meta(name).seasonal_only;
  }

  isEnabled(name: string): boolean {
    return this.enabled.has(name);
  }

  setPeriod(period: number): void {
    this.period = period;
    if (period === 1) {
      for (const name of [...this.enabled.keys()]) {
        if (this.meta(name).seasonal_only) this.enabled.delete(name);
      }
    }
  }

  toggle(name: string, on: boolean, value?: number): void {
    if (on) {
      if (this.isDisabled(name)) {
        throw new Error(`${name} requires a seasonal period`);
      }
      this.enabled.set(name, value ?? this.enabled.get(name) ?? 0);
    } else {
      this.enabled.delete(name);
    }
  }

  setValue(name: string, value: number): void {
    if (!this.enabled.has(name)) throw new Error(`${name} is not enabled`);
    this.enabled.set(name, value);
  }

  targets(): Record<string, number> {
    return Object.fromEntries(this.enabled);
  }

  private inRange(meta: FeatureMeta, value: number): string | null {
    if (!Number.isFinite(value)) return "must be a finite number";
    if (meta.lower !== null) {
      if (meta.lower_open ? value <= meta.lower : value < meta.lower) {
        return `must be ${meta.lower_open ? ">" : ">="} ${meta.lower}`;
      }
    }
    if (meta.upper !== null) {
      if (meta.upper_open ? value >= meta.upper : value > meta.upper) {
        return `must be ${meta.upper_open ? "<" : "<="} ${meta.upper}`;
      }
    }
    if (meta.integer && !Number.isInteger(value)) return "must be an integer";
    return null;
  }

  errors(): FieldError[] {
    const out: FieldError[] = [];
    for (const [name, value] of this.enabled) {
      const message = this.inRange(this.meta(name), value);
      if (message) out.push({ feature: name, message });
    }
    return out;
  }

  canSubmit(): boolean {
    return (
      this.enabled.size > 0 &&
      this.errors().length === 0 &&
      this.length >= 8 &&
      this.count >= 1
    );
  }

  /** The exact POST /api/tune body. */
  payload(): TuneRequest {
    if (!this.canSubmit()) throw new Error("form is not submittable");
    const body: TuneRequest = {
      period: this.period,
      length: this.length,
      count: this.count,
      seed: this.seed,
      features: this.targets(),
    };
    if (Object.keys(this.ga).length > 0) body.ga = { ...this.ga };
    return body;
  }
}
