/**
 * Heatmap color scale for the mean synchronization error.
 *
 * The domain is fixed to [0, 10] so images from different runs are visually
 * comparable; values above 10 (lost synchronization, blow-up sentinels) are
 * binned to the top color.
 */

export const SCALE_MIN = 0;
export const SCALE_MAX = 10;

/** Anchor stops of a dark-blue -> cyan -> yellow -> red ramp. */
const STOPS: Array<[number, [number, number, number]]> = [
  [0.0, [8, 29, 88]],
  [0.25, [34, 94, 168]],
  [0.5, [65, 182, 196]],
  [0.75, [254, 204, 92]],
  [1.0, [189, 0, 38]],
];

function hex2(v: number): string {
  return Math.round(v).toString(16).padStart(2, "0");
}

/** Map an error value to a "#rrggbb" color, clamping outside [0, 10]. */
export function colorFor(value: number): string {
  let t = (value - SCALE_MIN) / (SCALE_MAX - SCALE_MIN);
  if (!Number.isFinite(t)) t = 1;
  t = Math.max(0, Math.min(1, t));
  for (let i = 1; i < STOPS.length; i++) {
    const [t1, c1] = STOPS[i];
    if (t <= t1) {
      const [t0, c0] = STOPS[i - 1];
      const u = (t - t0) / (t1 - t0);
      return (
        "#" +
        hex2(c0[0] + u * (c1[0] - c0[0])) +
        hex2(c0[1] + u * (c1[1] - c0[1])) +
        hex2(c0[2] + u * (c1[2] - c0[2]))
      );
    }
  }
  const last = STOPS[STOPS.length - 1][1];
  return "#" + hex2(last[0]) + hex2(last[1]) + hex2(last[2]);
}
