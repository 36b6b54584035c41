/**
 * Closed-form win rates for the pairings the helper buttons can
 * produce, mirroring the lab's catalogue on the server side.  Anything
 * outside the table renders without a reference line; in particular a
 * finite catalog host gets no switch reference because checking its
 * mean prize state would mean doing quantum bookkeeping in the client.
 */

import { HostSpec, RulesConfig } from "./api.js";

export type HelperMode =
  | "stick"
  | "switch"
  | "cheat_finite"
  | "cheat_real"
  | "manual"
  | "reveal";

// hosts whose mean prize state is maximally mixed by construction
const MIXED_MEAN_HOSTS = new Set([
  "haar",
  "axes",
  "real",
  "ignore_notepad",
  "entangled",
]);

export function referenceValue(
  host: HostSpec | null,
  mode: HelperMode,
  rules: RulesConfig
): number | null {
  if (rules.variant === "touch_allowed") return 0.5;
  if (rules.variant === "complete_vn") return 0.5;
  const kind = host?.kind ?? null;
  if (rules.variant === "reveal_wins") {
    if (kind === "ignore_notepad" && mode === "switch" && !host?.reveal_bias) {
      return 2 / 3;
    }
    return null;
  }
  if (rules.variant !== "strict") return null;
  if (mode === "switch") {
    return kind !== null && MIXED_MEAN_HOSTS.has(kind) ? 2 / 3 : null;
  }
  if (mode === "stick") {
    return kind === "haar" ? 1 / 3 : null;
  }
  // a truncated announcement voids the exactness of both cheats
  if (rules.announce_precision_digits != null) return null;
  if (mode === "cheat_real") {
    return kind === "real" ? 1 : null;
  }
  if (mode === "cheat_finite") {
    if (kind === "axes" || kind === "finite_set") return 1;
    if (kind === "entangled") {
      const policy = host?.policy ?? "fixed_povm";
      return policy === "fixed_povm" ? 1 : null;
    }
    return null;
  }
  return null;
}
