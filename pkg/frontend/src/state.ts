/**
 * Client-side bookkeeping.  Every number shown on the scoreboard
 * originates from a server payload: the headline row is the session's
 * stats object verbatim, and each breakdown entry is folded from a
 * server-confirmed last_result.  The client never scores a game.
 */

import { LastResult, SessionState, Stats } from "./api.js";
import { Vec3 } from "./complex.js";
import { HelperMode } from "./reference.js";

export interface GameRecord {
  sessionId: string;
  gameIndex: number;
  hostLabel: string;
  variant: string;
  mode: HelperMode;
  won: boolean | null;
  aborted: boolean;
  reference: number | null;
}

export interface BreakdownRow {
  hostLabel: string;
  mode: HelperMode;
  games: number;
  wins: number;
  reference: number | null;
}

/** The view the panels render; mirrors the server transcript. */
export interface UiGameState {
  sessionId: string;
  stage: string;
  hostKind: string | null;
  variant: string;
  phi: Vec3 | null;
  chi: Vec3 | null;
  pPrime: Vec3 | null;
  outcome: LastResult | null;
  scoreboard: {
    games: number;
    wins: number;
    rate: number | null;
    reference: number | null;
  };
}

export function uiStateFrom(
  state: SessionState,
  pPrime: Vec3 | null,
  reference: number | null
): UiGameState {
  return {
    sessionId: state.session_id,
    stage: state.stage,
    hostKind: state.host?.kind ?? null,
    variant: state.rules.variant,
    phi: state.p,
    chi: state.chi,
    pPrime,
    outcome: state.last_result,
    scoreboard: {
      games: state.stats.games,
      wins: state.stats.wins,
      rate: state.stats.estimate,
      reference,
    },
  };
}

const EMPTY_STATS: Stats = {
  games: 0,
  wins: 0,
  estimate: null,
  ci_low: null,
  ci_high: null,
};

export class Scoreboard {
  stats: Stats = EMPTY_STATS;
  records: GameRecord[] = [];
  aborted = 0;
  private seen = new Set<string>();

  /** Adopt the server's running score for the active session as-is. */
  noteStats(stats: Stats): void {
    this.stats = stats;
  }

  /** Fold one server-confirmed result; repeats of the same game are ignored. */
  noteResult(record: GameRecord): void {
    const key = `${record.sessionId}:${record.gameIndex}`;
    if (this.seen.has(key)) return;
    this.seen.add(key);
    this.records.push(record);
    if (record.aborted) this.aborted += 1;
  }

  resetSession(): void {
    this.stats = EMPTY_STATS;
  }

  breakdown(): BreakdownRow[] {
    const rows = new Map<string, BreakdownRow>();
    for (const record of this.records) {
      if (record.aborted || record.won === null) continue;
      const key = `${record.hostLabel}|${record.mode}`;
      let row = rows.get(key);
      if (!row) {
        row = {
          hostLabel: record.hostLabel,
          mode: record.mode,
          games: 0,
          wins: 0,
          reference: record.reference,
        };
        rows.set(key, row);
      }
      row.games += 1;
      if (record.won) row.wins += 1;
    }
    return [...rows.values()];
  }
}
