/**
 * Single-page client for the game service.
 *
 * The player picks a host and rule variant, enters or presets her
 * vector, watches the host's announced door at full precision, and
 * commits a final choice by hand or through helper buttons.  Every
 * stage transition waits for the server's answer; the client validates
 * input shape before sending but never applies a game rule itself.
 */

import {
  ApiClient,
  ApiError,
  HostSpec,
  SessionState,
  StrategyCatalog,
} from "./api.js";
import {
  format17,
  formatPolar,
  formatRect,
  normOf,
  overlap,
  parseField,
  PRESETS,
  UNIT_TOL,
  Vec3,
} from "./complex.js";
import { HelperMode, referenceValue } from "./reference.js";
import { Scoreboard, UiGameState, uiStateFrom } from "./state.js";

// modulus below which a chi component is flagged as the giveaway zero
const NEAR_ZERO = 1e-6;

// the triple game needs a three-vector entry widget this client lacks
const UNSUPPORTED_VARIANTS = new Set(["triple_choice"]);

type CheatMode = "cheat_finite" | "cheat_real";

const CHEAT_HOSTS: Record<CheatMode, Set<string>> = {
  cheat_finite: new Set(["axes", "finite_set", "entangled"]),
  cheat_real: new Set(["real"]),
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(label: string, className = "btn"): HTMLButtonElement {
  const node = el("button", className, label);
  node.type = "button";
  return node;
}

interface VectorEntry {
  root: HTMLElement;
  fields: HTMLInputElement[];
  normalizeBtn: HTMLButtonElement;
  status: HTMLElement;
  read(): Vec3 | null;
  write(v: Vec3): void;
  say(message: string): void;
}

/** Three complex components as paired re/im fields plus a normalize button. */
function vectorEntry(name: string): VectorEntry {
  const root = el("div", "vec-entry");
  const fields: HTMLInputElement[] = [];
  for (let k = 0; k < 3; k++) {
    const row = el("div", "vec-entry__row");
    row.append(el("span", "vec-entry__label", `${name}${k + 1}`));
    for (const part of ["re", "im"] as const) {
      const input = el("input", "vec-entry__field");
      input.type = "text";
      input.placeholder = part;
      input.setAttribute("aria-label", `${name}${k + 1} ${part}`);
      fields.push(input);
      row.append(input);
    }
    root.append(row);
  }
  const controls = el("div", "vec-entry__controls");
  const normalizeBtn = button("normalize", "btn btn--small");
  const status = el("span", "vec-entry__status");
  controls.append(normalizeBtn, status);
  root.append(controls);

  const read = (): Vec3 | null => {
    const parts: number[] = [];
    for (const field of fields) {
      const value = parseField(field.value);
      if (value === null) {
        status.textContent = "every entry must be a plain number";
        return null;
      }
      parts.push(value);
    }
    status.textContent = "";
    return [
      [parts[0], parts[1]],
      [parts[2], parts[3]],
      [parts[4], parts[5]],
    ];
  };

  const write = (v: Vec3): void => {
    for (let k = 0; k < 3; k++) {
      fields[2 * k].value = format17(v[k][0]);
      fields[2 * k + 1].value = format17(v[k][1]);
    }
    status.textContent = "";
  };

  normalizeBtn.addEventListener("click", () => {
    const v = read();
    if (v === null) return;
    const n = normOf(v);
    if (n === 0) {
      status.textContent = "cannot normalize the zero vector";
      return;
    }
    write(v.map(([re, im]) => [re / n, im / n]) as Vec3);
  });

  return {
    root,
    fields,
    normalizeBtn,
    status,
    read,
    write,
    say: (message) => {
      status.textContent = message;
    },
  };
}

export class App {
  readonly client: ApiClient;
  readonly root: HTMLElement;

  catalog: StrategyCatalog | null = null;
  session: SessionState | null = null;
  scoreboard = new Scoreboard();
  ui: UiGameState | null = null;
  lastMode: HelperMode = "manual";
  pPrimePlayed: Vec3 | null = null;

  private chain: Promise<void> = Promise.resolve();

  // setup panel
  hostSelect!: HTMLSelectElement;
  paramsInput!: HTMLTextAreaElement;
  variantSelect!: HTMLSelectElement;
  digitsInput!: HTMLInputElement;
  seedInput!: HTMLInputElement;
  discloseInput!: HTMLInputElement;
  startBtn!: HTMLButtonElement;
  setupStatus!: HTMLElement;

  // game panel
  gameSection!: HTMLElement;
  metaLine!: HTMLElement;
  stageBadge!: HTMLElement;
  restartNote!: HTMLElement;
  doorPanel!: HTMLElement;
  doorEntry!: VectorEntry;
  presetButtons = new Map<string, HTMLButtonElement>();
  doorBtn!: HTMLButtonElement;
  stuckNote!: HTMLElement;
  openedPanel!: HTMLElement;
  phiEcho!: HTMLElement;
  chiList!: HTMLElement;
  touchNote!: HTMLElement;
  finalEntry!: VectorEntry;
  finalBtn!: HTMLButtonElement;
  helperButtons = new Map<string, HTMLButtonElement>();
  outcomeBanner!: HTMLElement;
  playedLine!: HTMLElement;
  scoreGames!: HTMLElement;
  scoreWins!: HTMLElement;
  scoreRate!: HTMLElement;
  scoreCi!: HTMLElement;
  scoreReference!: HTMLElement;
  abortNote!: HTMLElement;
  breakdownBody!: HTMLTableSectionElement;
  errorBox!: HTMLElement;

  constructor(root: HTMLElement, client: ApiClient) {
    this.root = root;
    this.client = client;
    this.buildSetupPanel();
    this.buildGamePanel();
    this.render();
  }

  /** Resolves once every queued user action has been answered. */
  settled(): Promise<void> {
    return this.chain;
  }

  init(): Promise<void> {
    return this.enqueue("setup", async () => {
      this.setupStatus.textContent = "loading strategy catalog";
      this.catalog = await this.client.strategies();
      this.populateChoices();
      this.setupStatus.textContent = "";
    });
  }

  private enqueue(context: string, task: () => Promise<void>): Promise<void> {
    const next = this.chain.then(async () => {
      this.errorBox.textContent = "";
      this.errorBox.hidden = true;
      try {
        await task();
      } catch (error) {
        await this.handleFailure(error, context);
      }
      this.render();
    });
    this.chain = next;
    return next;
  }

  private async handleFailure(error: unknown, context: string): Promise<void> {
    if (!(error instanceof ApiError)) {
      this.errorBox.textContent =
        error instanceof Error ? error.message : String(error);
      this.errorBox.hidden = false;
      return;
    }
    this.errorBox.textContent = actionableMessage(error, context);
    this.errorBox.hidden = false;
    // a 409 means the server-side game moved on without us (for
    // example a strict-rules reveal aborting the round); re-sync
    if (error.status === 409 && this.session) {
      try {
        const state = await this.client.getSession(this.session.session_id);
        this.processState(state, "manual");
      } catch {
        // keep the original message; the next action will surface it
      }
    }
    if (error.code === "not_found") {
      this.session = null;
    }
  }

  // ---- panel construction ----

  private buildSetupPanel(): void {
    const panel = el("section", "panel panel--setup");
    panel.append(el("h2", "panel__title", "new game"));

    const hostRow = el("div", "field-row");
    hostRow.append(el("label", "field-row__label", "host"));
    this.hostSelect = el("select", "field-row__control");
    hostRow.append(this.hostSelect);

    const paramsRow = el("div", "field-row");
    paramsRow.append(el("label", "field-row__label", "host params (JSON)"));
    this.paramsInput = el("textarea", "field-row__control");
    this.paramsInput.rows = 2;
    this.paramsInput.placeholder = "{} for defaults";
    paramsRow.append(this.paramsInput);

    const variantRow = el("div", "field-row");
    variantRow.append(el("label", "field-row__label", "rule variant"));
    this.variantSelect = el("select", "field-row__control");
    variantRow.append(this.variantSelect);

    const digitsRow = el("div", "field-row");
    digitsRow.append(el("label", "field-row__label", "announce digits"));
    this.digitsInput = el("input", "field-row__control");
    this.digitsInput.type = "text";
    this.digitsInput.placeholder = "full precision";
    digitsRow.append(this.digitsInput);

    const seedRow = el("div", "field-row");
    seedRow.append(el("label", "field-row__label", "seed"));
    this.seedInput = el("input", "field-row__control");
    this.seedInput.type = "text";
    this.seedInput.placeholder = "random";
    seedRow.append(this.seedInput);

    const discloseRow = el("div", "field-row");
    const discloseLabel = el("label", "field-row__check");
    this.discloseInput = el("input");
    this.discloseInput.type = "checkbox";
    this.discloseInput.checked = true;
    discloseLabel.append(
      this.discloseInput,
      document.createTextNode(" disclose the host strategy (enables cheats)")
    );
    discloseRow.append(discloseLabel);

    this.startBtn = button("start session", "btn btn--primary");
    this.startBtn.addEventListener("click", () => {
      void this.startSession();
    });
    this.setupStatus = el("div", "status");

    panel.append(
      hostRow,
      paramsRow,
      variantRow,
      digitsRow,
      seedRow,
      discloseRow,
      this.startBtn,
      this.setupStatus
    );
    this.root.append(panel);
  }

  private buildGamePanel(): void {
    this.gameSection = el("section", "panel panel--game");
    this.gameSection.hidden = true;

    const head = el("div", "game-head");
    this.metaLine = el("div", "game-head__meta");
    this.stageBadge = el("span", "badge");
    head.append(this.metaLine, this.stageBadge);
    this.restartNote = el("div", "note");
    this.restartNote.hidden = true;

    this.doorPanel = el("div", "door-panel");
    this.doorPanel.append(
      el("h3", "panel__subtitle", "pick your door Φ")
    );
    const presetRow = el("div", "preset-row");
    for (const preset of PRESETS) {
      const btn = button(preset.label, "btn btn--small");
      btn.addEventListener("click", () => {
        this.doorEntry.write(preset.vector);
      });
      this.presetButtons.set(preset.label, btn);
      presetRow.append(btn);
    }
    this.doorPanel.append(presetRow);
    this.doorEntry = vectorEntry("φ");
    this.doorPanel.append(this.doorEntry.root);
    this.doorBtn = button("ask the host to open a door", "btn btn--primary");
    this.doorBtn.addEventListener("click", () => {
      void this.submitDoor();
    });
    this.doorPanel.append(this.doorBtn);

    this.stuckNote = el("div", "note note--warn");
    this.stuckNote.textContent =
      "the host failed to open a legal door; this round cannot " +
      "continue, start a new session";
    this.stuckNote.hidden = true;

    this.openedPanel = el("div", "opened-panel");
    this.openedPanel.append(
      el("h3", "panel__subtitle", "the host opened χ")
    );
    this.phiEcho = el("div", "phi-echo");
    this.chiList = el("div", "chi-list");
    this.touchNote = el("div", "note");
    this.touchNote.textContent =
      "the host touched the prize: it is now an even mixture over " +
      "the two closed doors";
    this.touchNote.hidden = true;
    this.openedPanel.append(this.phiEcho, this.chiList, this.touchNote);

    const helperRow = el("div", "helper-row");
    const helpers: [string, string][] = [
      ["stick", "stick"],
      ["switch", "switch"],
      ["cheat_finite", "catalog cheat"],
      ["cheat_real", "real cheat"],
    ];
    for (const [mode, label] of helpers) {
      const btn = button(label, "btn");
      btn.addEventListener("click", () => {
        void this.playHelper(mode as HelperMode & string);
      });
      this.helperButtons.set(mode, btn);
      helperRow.append(btn);
    }
    this.openedPanel.append(
      el("h3", "panel__subtitle", "final choice p′"),
      helperRow,
      el("div", "note", "or enter a vector orthogonal to χ:")
    );
    this.finalEntry = vectorEntry("p′");
    this.finalBtn = button("play this vector", "btn btn--primary");
    this.finalBtn.addEventListener("click", () => {
      void this.submitFinalManual();
    });
    this.openedPanel.append(this.finalEntry.root, this.finalBtn);

    this.outcomeBanner = el("div", "outcome");
    this.outcomeBanner.hidden = true;
    this.playedLine = el("div", "played-line");
    this.playedLine.hidden = true;

    const score = el("div", "scoreboard");
    score.append(el("h3", "panel__subtitle", "scoreboard"));
    const line = el("div", "scoreboard__line");
    this.scoreGames = el("span", "scoreboard__value");
    this.scoreWins = el("span", "scoreboard__value");
    this.scoreRate = el("span", "scoreboard__value");
    this.scoreCi = el("span", "scoreboard__ci");
    line.append(
      el("span", "scoreboard__key", "games"),
      this.scoreGames,
      el("span", "scoreboard__key", "wins"),
      this.scoreWins,
      el("span", "scoreboard__key", "rate"),
      this.scoreRate,
      this.scoreCi
    );
    this.scoreReference = el("div", "scoreboard__reference");
    this.abortNote = el("div", "note");
    this.abortNote.hidden = true;
    const table = el("table", "breakdown");
    const headRow = el("tr");
    for (const title of ["host", "mode", "wins/games", "rate", "reference"]) {
      headRow.append(el("th", undefined, title));
    }
    const thead = el("thead");
    thead.append(headRow);
    this.breakdownBody = el("tbody");
    table.append(thead, this.breakdownBody);
    score.append(line, this.scoreReference, this.abortNote, table);

    this.errorBox = el("div", "error-box");
    this.errorBox.hidden = true;

    this.gameSection.append(
      head,
      this.restartNote,
      this.errorBox,
      this.doorPanel,
      this.stuckNote,
      this.openedPanel,
      this.outcomeBanner,
      this.playedLine,
      score
    );
    this.root.append(this.gameSection);
  }

  private populateChoices(): void {
    if (!this.catalog) return;
    this.hostSelect.replaceChildren();
    for (const host of this.catalog.hosts) {
      const option = el("option", undefined, `${host.kind}: ${host.label}`);
      option.value = host.kind;
      this.hostSelect.append(option);
    }
    this.variantSelect.replaceChildren();
    for (const variant of this.catalog.variants) {
      if (UNSUPPORTED_VARIANTS.has(variant)) continue;
      const option = el("option", undefined, variant);
      option.value = variant;
      this.variantSelect.append(option);
    }
  }

  // ---- user actions ----

  startSession(): Promise<void> {
    return this.enqueue("setup", async () => {
      const kind = this.hostSelect.value;
      if (!kind) {
        this.setupStatus.textContent = "catalog not loaded yet";
        return;
      }
      let host: HostSpec = { kind };
      const rawParams = this.paramsInput.value.trim();
      if (rawParams) {
        let params: unknown;
        try {
          params = JSON.parse(rawParams);
        } catch {
          this.setupStatus.textContent = "host params must be valid JSON";
          return;
        }
        if (
          typeof params !== "object" ||
          params === null ||
          Array.isArray(params)
        ) {
          this.setupStatus.textContent = "host params must be a JSON object";
          return;
        }
        host = { ...(params as Record<string, unknown>), kind };
      }
      const rules: { variant: string; announce_precision_digits?: number } = {
        variant: this.variantSelect.value,
      };
      const digitsText = this.digitsInput.value.trim();
      if (digitsText) {
        const digits = Number(digitsText);
        if (!Number.isInteger(digits) || digits < 1) {
          this.setupStatus.textContent =
            "announce digits must be a positive integer";
          return;
        }
        rules.announce_precision_digits = digits;
      }
      const body: {
        host: HostSpec;
        rules: typeof rules;
        disclose_host: boolean;
        seed?: number;
      } = { host, rules, disclose_host: this.discloseInput.checked };
      const seedText = this.seedInput.value.trim();
      if (seedText) {
        const seed = Number(seedText);
        if (!Number.isSafeInteger(seed)) {
          this.setupStatus.textContent = "seed must be an integer";
          return;
        }
        body.seed = seed;
      }
      const state = await this.client.createSession(body);
      this.setupStatus.textContent = "";
      this.scoreboard.resetSession();
      this.lastMode = "manual";
      this.pPrimePlayed = null;
      this.processState(state, "manual");
    });
  }

  submitDoor(): Promise<void> {
    return this.enqueue("door", async () => {
      if (!this.session) return;
      const phi = this.doorEntry.read();
      if (phi === null) return;
      const n = normOf(phi);
      if (Math.abs(n - 1) > UNIT_TOL) {
        this.doorEntry.say(
          `Φ must be a unit vector (norm is ${n.toPrecision(6)}); ` +
            "use normalize"
        );
        return;
      }
      const state = await this.client.submitDoor(this.session.session_id, phi);
      this.pPrimePlayed = null;
      this.processState(state, state.reveal ? "reveal" : "manual");
      await this.refreshIfSettled();
    });
  }

  playHelper(mode: HelperMode & string): Promise<void> {
    return this.enqueue("final", async () => {
      if (!this.session) return;
      const hint = await this.client.hint(this.session.session_id, mode);
      // show the suggested vector, then play exactly what is shown;
      // the 17-digit rendering parses back to the same doubles
      this.finalEntry.write(hint.p_prime);
      const played = this.finalEntry.read();
      if (played === null) return;
      await this.commitFinal(played, mode);
    });
  }

  submitFinalManual(): Promise<void> {
    return this.enqueue("final", async () => {
      if (!this.session) return;
      const vec = this.finalEntry.read();
      if (vec === null) return;
      const n = normOf(vec);
      if (Math.abs(n - 1) > UNIT_TOL) {
        this.finalEntry.say(
          `p′ must be a unit vector (norm is ${n.toPrecision(6)}); ` +
            "use normalize"
        );
        return;
      }
      const chi = this.session.chi;
      if (chi !== null) {
        const off = overlap(vec, chi);
        if (off > this.finalTolerance()) {
          this.finalEntry.say(
            `p′ must be orthogonal to the opened door ` +
              `(|⟨p′|χ⟩| = ${off.toPrecision(3)})`
          );
          return;
        }
      }
      await this.commitFinal(vec, "manual");
    });
  }

  private async commitFinal(vec: Vec3, mode: HelperMode): Promise<void> {
    if (!this.session) return;
    const state = await this.client.submitFinal(this.session.session_id, {
      p_prime: vec,
    });
    this.pPrimePlayed = vec;
    this.lastMode = mode;
    this.processState(state, mode);
    await this.refreshIfSettled();
  }

  /** Tolerance the server will apply to the final orthogonality gate. */
  private finalTolerance(): number {
    const digits = this.session?.rules.announce_precision_digits;
    if (digits == null) return UNIT_TOL;
    return Math.max(UNIT_TOL, 32 * 10 ** -digits);
  }

  // ---- server state intake ----

  private processState(state: SessionState, mode: HelperMode): void {
    this.session = state;
    this.scoreboard.noteStats(state.stats);
    if (state.last_result) {
      this.scoreboard.noteResult({
        sessionId: state.session_id,
        gameIndex: state.last_result.game_index,
        hostLabel: this.hostLabel(state),
        variant: state.rules.variant,
        mode,
        won: state.last_result.won,
        aborted: state.last_result.aborted,
        reference: referenceValue(state.host, mode, state.rules),
      });
    }
    this.ui = uiStateFrom(
      state,
      this.pPrimePlayed,
      referenceValue(state.host, this.lastMode, state.rules)
    );
  }

  /** After a settled round, pull the freshly armed game. */
  private async refreshIfSettled(): Promise<void> {
    if (!this.session) return;
    if (this.session.stage !== "finished" && this.session.stage !== "aborted") {
      return;
    }
    const state = await this.client.getSession(this.session.session_id);
    this.processState(state, "manual");
  }

  private hostLabel(state: SessionState): string {
    return state.host?.kind ?? "undisclosed";
  }

  // ---- rendering ----

  render(): void {
    const s = this.session;
    this.gameSection.hidden = s === null;
    if (s === null) return;

    this.metaLine.textContent =
      `session ${s.session_id.slice(0, 8)} · game #${s.game_index} ` +
      `· ${s.rules.variant} · host: ${this.hostLabel(s)} ` +
      `· seed ${s.seed}`;
    this.stageBadge.textContent = s.stage;
    this.stageBadge.dataset.stage = s.stage;

    this.restartNote.hidden = s.restarts === 0;
    if (s.restarts > 0) {
      this.restartNote.textContent =
        `the host hit the prize and restarted this round ` +
        `(${s.restarts} so far); pick Φ again`;
    }

    this.doorPanel.hidden = s.stage !== "prepared";
    this.stuckNote.hidden = s.stage !== "chosen";
    this.openedPanel.hidden = s.stage !== "opened";

    if (s.stage === "opened") {
      this.renderOpened(s);
    }
    this.renderOutcome(s);
    this.renderScoreboard(s);
  }

  private renderOpened(s: SessionState): void {
    if (s.p !== null) {
      const compact = s.p
        .map(([re, im]) => `${re.toPrecision(6)}${im < 0 ? "" : "+"}${im.toPrecision(6)}i`)
        .join(", ");
      this.phiEcho.textContent = `your Φ = (${compact})`;
    } else {
      this.phiEcho.textContent = "";
    }
    this.chiList.replaceChildren();
    if (s.chi !== null) {
      for (let k = 0; k < 3; k++) {
        const pair = s.chi[k];
        const row = el("div", "chi-row");
        const modulus = Math.hypot(pair[0], pair[1]);
        if (modulus < NEAR_ZERO) row.classList.add("chi-row--nearzero");
        row.append(
          el("span", "chi-row__index", `χ${k + 1}`),
          el("span", "chi-row__rect", formatRect(pair)),
          el("span", "chi-row__polar", formatPolar(pair))
        );
        this.chiList.append(row);
      }
    }
    this.touchNote.hidden = !s.touched;

    const disclosed = s.host?.kind ?? null;
    for (const [mode, btn] of this.helperButtons) {
      if (mode === "cheat_finite" || mode === "cheat_real") {
        const allowed =
          disclosed !== null && CHEAT_HOSTS[mode as CheatMode].has(disclosed);
        btn.disabled = !allowed;
        btn.title = allowed
          ? ""
          : disclosed === null
            ? "cheats need a disclosed host"
            : `no ${mode} against a ${disclosed} host`;
      } else {
        btn.disabled = false;
        btn.title = "";
      }
    }
  }

  private renderOutcome(s: SessionState): void {
    const result = s.last_result;
    if (result === null) {
      this.outcomeBanner.hidden = true;
      this.playedLine.hidden = true;
      return;
    }
    this.outcomeBanner.hidden = false;
    this.outcomeBanner.classList.remove(
      "outcome--won",
      "outcome--lost",
      "outcome--aborted"
    );
    if (result.aborted) {
      this.outcomeBanner.classList.add("outcome--aborted");
      this.outcomeBanner.textContent =
        `round ${result.game_index}: aborted (not scored)`;
    } else if (result.won) {
      this.outcomeBanner.classList.add("outcome--won");
      this.outcomeBanner.textContent =
        `round ${result.game_index}: you found the prize`;
    } else {
      this.outcomeBanner.classList.add("outcome--lost");
      this.outcomeBanner.textContent =
        `round ${result.game_index}: empty door`;
    }
    if (this.pPrimePlayed !== null) {
      const compact = this.pPrimePlayed
        .map(([re, im]) => `${re.toPrecision(6)}${im < 0 ? "" : "+"}${im.toPrecision(6)}i`)
        .join(", ");
      this.playedLine.textContent = `you played p′ = (${compact})`;
      this.playedLine.hidden = false;
    } else {
      this.playedLine.hidden = true;
    }
  }

  private renderScoreboard(s: SessionState): void {
    const stats = this.scoreboard.stats;
    this.scoreGames.textContent = String(stats.games);
    this.scoreWins.textContent = String(stats.wins);
    this.scoreRate.textContent =
      stats.estimate === null ? "n/a" : formatRate(stats.estimate);
    this.scoreCi.textContent =
      stats.ci_low === null || stats.ci_high === null
        ? ""
        : `95% CI [${stats.ci_low.toFixed(4)}, ${stats.ci_high.toFixed(4)}]`;

    const reference = referenceValue(s.host, this.lastMode, s.rules);
    this.scoreReference.textContent =
      reference === null
        ? "no analytic reference for this pairing"
        : `analytic reference (${this.lastMode}): ${formatRate(reference)}`;

    this.abortNote.hidden = this.scoreboard.aborted === 0;
    if (this.scoreboard.aborted > 0) {
      this.abortNote.textContent =
        `${this.scoreboard.aborted} aborted round(s), not scored`;
    }

    this.breakdownBody.replaceChildren();
    for (const row of this.scoreboard.breakdown()) {
      const tr = el("tr");
      tr.append(
        el("td", undefined, row.hostLabel),
        el("td", undefined, row.mode),
        el("td", undefined, `${row.wins}/${row.games}`),
        el("td", undefined, formatRate(row.wins / row.games)),
        el(
          "td",
          undefined,
          row.reference === null ? "n/a" : formatRate(row.reference)
        )
      );
      this.breakdownBody.append(tr);
    }
  }
}

export function formatRate(value: number): string {
  return `${(100 * value).toFixed(2)}%`;
}

export function actionableMessage(error: ApiError, context: string): string {
  switch (error.code) {
    case "rule_violation":
      if (context === "final") {
        return (
          `${error.message}. Pick a vector orthogonal to the opened ` +
          "door, or use a helper button."
        );
      }
      return `${error.message}. The round is void; a fresh one starts now.`;
    case "wrong_stage":
      return `${error.message}. Re-syncing with the server.`;
    case "invalid_input":
      if (context === "setup") {
        return `${error.message}. Check the host parameters and rules.`;
      }
      return `${error.message}. Check the vector entries.`;
    case "not_found":
      return "the session expired on the server; start a new game";
    default:
      return error.message;
  }
}
