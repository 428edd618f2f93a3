import { ApiClient, ValidationError } from "./api.js";
import { renderTraceSvg, seriesPath, TracePoint } from "./chart.js";
import { saveBytes } from "./download.js";
import { TuneFormState } from "./form.js";
import { ProgressStream } from "./sse.js";
import type { FeatureMeta, ProgressEvent, TuneResultBundle } from "./types.js";

const PERIOD_CHOICES = [
  { value: 1, label: "Yearly (1)" },
  { value: 4, label: "Quarterly (4)" },
  { value: 12, label: "Monthly (12)" },
  { value: 52, label: "Weekly (52)" },
];

const SERIES_PER_PAGE = 12;

export class App {
  private form!: TuneFormState;
  private trace: TracePoint[] = [];
  private stream: ProgressStream | null = null;
  private jobId: string | null = null;
  private resultBytes: Uint8Array | null = null;
  private result: TuneResultBundle | null = null;
  private page = 0;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  async start(): Promise<void> {
    let metadata: FeatureMeta[];
    try {
      metadata = await this.api.featureNames();
    } catch (err) {
      this.root.innerHTML = `<p class="banner error">Cannot reach the service: ${String(err)}</p>`;
      return;
    }
    this.form = new TuneFormState(
      metadata.filter((m) => !["length", "nPeriods", "periods"].includes(m.name)),
    );
    this.renderShell();
    this.renderStructureTab();
    this.renderFeaturesTab();
    this.refreshSubmit();
  }

  private el<T extends HTMLElement>(selector: string): T {
    const found = this.root.querySelector(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found as T;
  }

  private renderShell(): void {
    this.root.innerHTML = `
      <header><h1>Series generator</h1>
        <p class="sub">Tune mixture-AR models toward target features and download the results.</p>
      </header>
      <nav class="tabs">
        <button data-tab="structure" class="active">Structure</button>
        <button data-tab="features">Features</button>
        <button data-tab="visualise">Visualise</button>
        <button data-tab="download">Download series</button>
      </nav>
      <main>
        <section id="tab-structure" class="tab active"></section>
        <section id="tab-features" class="tab"></section>
        <section id="tab-visualise" class="tab">
          <div id="trace"></div>
          <div id="feature-table"></div>
          <div id="series-plots"></div>
        </section>
        <section id="tab-download" class="tab">
          <p id="download-state">No finished job yet.</p>
          <button id="download-btn" disabled>Download result JSON</button>
        </section>
      </main>
      <footer>
        <button id="submit-btn" disabled>Generate</button>
        <span id="submit-hint"></span>
        <span id="job-state"></span>
      </footer>`;
    for (const btn of this.root.querySelectorAll<HTMLButtonElement>(".tabs button")) {
      btn.addEventListener("click", () => this.showTab(btn.dataset.tab!));
    }
    this.el<HTMLButtonElement>("#submit-btn").addEventListener("click", () => {
      void this.submit();
    });
    this.el<HTMLButtonElement>("#download-btn").addEventListener("click", () => {
      if (this.resultBytes && this.jobId) {
        saveBytes(this.resultBytes, `gratis-${this.jobId}.json`);
      }
    });
  }

  private showTab(name: string): void {
    for (const btn of this.root.querySelectorAll<HTMLButtonElement>(".tabs button")) {
      btn.classList.toggle("active", btn.dataset.tab === name);
    }
    for (const tab of this.root.querySelectorAll<HTMLElement>(".tab")) {
      tab.classList.toggle("active", tab.id === `tab-${name}`);
    }
  }

  private renderStructureTab(): void {
    const tab = this.el<HTMLElement>("#tab-structure");
    tab.innerHTML = `
      <label>Seasonal period
        <select id="period">${PERIOD_CHOICES.map(
          (c) =>
            `<option value="${c.value}" ${c.value === this.form.period ? "selected" : ""}>${c.label}</option>`,
        ).join("")}</select>
      </label>
      <label>Length <input id="length" type="number" min="8" value="${this.form.length}"></label>
      <label>Number of series <input id="count" type="number" min="1" max="100" value="${this.form.count}"></label>
      <label>Seed <input id="seed" type="number" value="${this.form.seed}"></label>
      <details><summary>GA settings</summary>
        <label>Population <input id="ga-population" type="number" min="4" placeholder="30"></label>
        <label>Max generations <input id="ga-generations" type="number" min="1" placeholder="100"></label>
        <label>Fitness tolerance <input id="ga-tolerance" type="number" step="0.01" placeholder="-0.05"></label>
      </details>`;
    this.el<HTMLSelectElement>("#period").addEventListener("change", (ev) => {
      this.form.setPeriod(Number((ev.target as HTMLSelectElement).value));
      this.renderFeaturesTab();
      this.refreshSubmit();
    });
    this.el<HTMLInputElement>("#length").addEventListener("input", (ev) => {
      this.form.length = Number((ev.target as HTMLInputElement).value);
      this.refreshSubmit();
    });
    this.el<HTMLInputElement>("#count").addEventListener("input", (ev) => {
      this.form.count = Number((ev.target as HTMLInputElement).value);
      this.refreshSubmit();
    });
    this.el<HTMLInputElement>("#seed").addEventListener("input", (ev) => {
      this.form.seed = Number((ev.target as HTMLInputElement).value);
    });
    const gaFields: Array<[string, keyof typeof this.form.ga]> = [
      ["#ga-population", "population"],
      ["#ga-generations", "max_generations"],
      ["#ga-tolerance", "tolerance"],
    ];
    for (const [selector, key] of gaFields) {
      this.el<HTMLInputElement>(selector).addEventListener("input", (ev) => {
        const raw = (ev.target as HTMLInputElement).value;
        if (raw === "") delete this.form.ga[key];
        else (this.form.ga[key] as number) = Number(raw);
      });
    }
  }

  private renderFeaturesTab(): void {
    const tab = this.el<HTMLElement>("#tab-features");
    const rows = this.form.metadata
      .map((m) => {
        const disabled = this.form.isDisabled(m.name);
        const enabled = this.form.isEnabled(m.name);
        const range = [
          m.lower === null ? "-inf" : `${m.lower_open ? "(" : "["}${m.lower}`,
          m.upper === null ? "inf" : `${m.upper}${m.upper_open ? ")" : "]"}`,
        ].join(", ");
        return `<tr class="${disabled ? "disabled" : ""}">
          <td><input type="checkbox" data-feature="${m.name}" ${enabled ? "checked" : ""} ${disabled ? "disabled" : ""}></td>
          <td>${m.name}${m.seasonal_only ? ' <span class="badge">seasonal</span>' : ""}</td>
          <td class="range">${range}</td>
          <td><input type="number" step="any" data-target="${m.name}" ${enabled ? "" : "disabled"}></td>
          <td class="field-error" data-error="${m.name}"></td>
        </tr>`;
      })
      .join("");
    tab.innerHTML = `<table class="features">
      <thead><tr><th></th><th>Feature</th><th>Range</th><th>Target</th><th></th></tr></thead>
      <tbody>${rows}</tbody></table>`;
    for (const box of tab.querySelectorAll<HTMLInputElement>("input[type=checkbox]")) {
      box.addEventListener("change", () => {
        const name = box.dataset.feature!;
        const input = tab.querySelector<HTMLInputElement>(`input[data-target="${name}"]`)!;
        this.form.toggle(name, box.checked, Number(input.value) || 0);
        input.disabled = !box.checked;
        this.refreshSubmit();
      });
    }
    for (const input of tab.querySelectorAll<HTMLInputElement>("input[data-target]")) {
      input.addEventListener("input", () => {
        const name = input.dataset.target!;
        if (this.form.isEnabled(name)) {
          this.form.setValue(name, Number(input.value));
          this.refreshSubmit();
        }
      });
    }
  }

  private refreshSubmit(): void {
    const btn = this.el<HTMLButtonElement>("#submit-btn");
    const hint = this.el<HTMLElement>("#submit-hint");
    for (const cell of this.root.querySelectorAll<HTMLElement>(".field-error")) {
      cell.textContent = "";
    }
    const errors = this.form.errors();
    for (const err of errors) {
      const cell = this.root.querySelector<HTMLElement>(`[data-error="${err.feature}"]`);
      if (cell) cell.textContent = err.message;
    }
    btn.disabled = !this.form.canSubmit();
    hint.textContent = btn.disabled
      ? "Enable at least one feature and keep targets inside their ranges."
      : "";
  }

  private async submit(): Promise<void> {
    const state = this.el<HTMLElement>("#job-state");
    this.trace = [];
    this.result = null;
    this.resultBytes = null;
    this.renderTrace();
    try {
      const { job_id } = await this.api.submitTune(this.form.payload());
      this.jobId = job_id;
      state.textContent = `job ${job_id} running`;
      this.showTab("visualise");
      this.stream?.close();
      this.stream = new ProgressStream(this.api.eventsUrl(job_id), {
        onProgress: (ev) => this.onProgress(ev),
        onEnd: () => void this.onJobEnd(),
        onError: (message) => {
          state.textContent = message;
          state.classList.add("error");
        },
      });
      this.stream.open();
    } catch (err) {
      if (err instanceof ValidationError) {
        state.textContent = err.message;
        state.classList.add("error");
      } else {
        throw err;
      }
    }
  }

  private onProgress(ev: ProgressEvent): void {
    this.trace.push({ generation: ev.generation, fitness: ev.best_fitness });
    this.renderTrace();
    this.renderFeatureTable(ev.best_feature_values);
  }

  private async onJobEnd(): Promise<void> {
    if (!this.jobId) return;
    const state = this.el<HTMLElement>("#job-state");
    const snap = await this.api.jobSnapshot(this.jobId);
    if (snap.status !== "done") {
      state.textContent = `job failed: ${snap.error ?? "unknown error"}`;
      state.classList.add("error");
      return;
    }
    this.resultBytes = await this.api.resultBytes(this.jobId);
    this.result = JSON.parse(new TextDecoder().decode(this.resultBytes)) as TuneResultBundle;
    state.textContent = `job ${this.jobId} done`;
    this.renderSeriesPlots();
    this.el<HTMLButtonElement>("#download-btn").disabled = false;
    this.el<HTMLElement>("#download-state").textContent =
      `Result for job ${this.jobId} (${this.result.results.length} series) ready.`;
  }

  private renderTrace(): void {
    this.el<HTMLElement>("#trace").innerHTML = renderTraceSvg(this.trace);
  }

  private renderFeatureTable(values: Record<string, number | null>): void {
    const targets = this.form.targets();
    const rows = Object.entries(targets)
      .map(([name, goal]) => {
        const got = values[name];
        return `<tr><td>${name}</td><td>${goal}</td><td>${
          got === null || got === undefined ? "-" : got.toFixed(4)
        }</td></tr>`;
      })
      .join("");
    this.el<HTMLElement>("#feature-table").innerHTML =
      `<table><thead><tr><th>Feature</th><th>Target</th><th>Best so far</th></tr></thead>
       <tbody>${rows}</tbody></table>`;
  }

  private renderSeriesPlots(): void {
    if (!this.result) return;
    const container = this.el<HTMLElement>("#series-plots");
    const all = this.result.results;
    const pages = Math.ceil(all.length / SERIES_PER_PAGE);
    const page = Math.min(this.page, pages - 1);
    const slice = all.slice(page * SERIES_PER_PAGE, (page + 1) * SERIES_PER_PAGE);
    const cells = slice
      .map(
        (r) => `<figure class="cell">
          <svg viewBox="0 0 160 90"><path d="${seriesPath(r.series.values, 160, 90)}" fill="none"/></svg>
          <figcaption>#${r.series.id} fitness ${r.fitness.toFixed(3)}</figcaption>
        </figure>`,
      )
      .join("");
    const pager =
      pages > 1
        ? `<div class="pager">
            <button id="page-prev" ${page === 0 ? "disabled" : ""}>&laquo;</button>
            page ${page + 1} / ${pages}
            <button id="page-next" ${page >= pages - 1 ? "disabled" : ""}>&raquo;</button>
          </div>`
        : "";
    container.innerHTML = `<div class="grid">${cells}</div>${pager}`;
    container.querySelector("#page-prev")?.addEventListener("click", () => {
      this.page = Math.max(0, this.page - 1);
      this.renderSeriesPlots();
    });
    container.querySelector("#page-next")?.addEventListener("click", () => {
      this.page = Math.min(pages - 1, this.page + 1);
      this.renderSeriesPlots();
    });
  }
}
