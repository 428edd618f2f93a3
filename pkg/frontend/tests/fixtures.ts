import type { FeatureMeta } from "../src/types.js";

/** Metadata snapshot mirroring GET /api/feature-names for the names the
 * scenario tests touch (shape identical to the live service). */
export const FEATURE_METADATA: FeatureMeta[] = [
  meta("ndiffs", 0, 2, { integer: true }),
  meta("nsdiffs", 0, 1, { integer: true, seasonal_only: true }),
  meta("x.acf1", -1, 1, { lower_open: true, upper_open: true }),
  meta("entropy", 0, 1, { lower_open: true }),
  meta("stability", 0, null),
  meta("trend", 0, 1),
  meta("seasonal.strength", 0, 1, { seasonal_only: true }),
  meta("garch.r2", 0, 1),
  meta("linearity", null, null),
];

function meta(
  name: string,
  lower: number | null,
  upper: number | null,
  flags: Partial<FeatureMeta> = {},
): FeatureMeta {
  return {
    name,
    lower,
    upper,
    lower_open: false,
    upper_open: false,
    seasonal_only: false,
    integer: false,
    ...flags,
  };
}

/** The documented shiny-style scenario: ten monthly series of length 120
 * with seven feature targets. */
export const A2_TARGETS: Record<string, number> = {
  nsdiffs: 1,
  "x.acf1": 0.85,
  entropy: 0.55,
  stability: 0.73,
  trend: 0.91,
  "seasonal.strength": 0.95,
  "garch.r2": 0.07,
};
