/** Application wiring: load schema and instances, hold editor state and
 * per-instance session history, run explains one at a time. */

import { ApiClient } from "./api.js";
import { SessionHistory } from "./history.js";
import type {
  ConstraintDraft,
  ExplainResponse,
  InstanceRow,
  InstancesPage,
  ObjectiveName,
  Schema,
} from "./types.js";
import { renderComparePanel } from "./ui/comparePanel.js";
import { renderConstraintEditor, type EditorState } from "./ui/constraintEditor.js";
import { renderInstancePicker } from "./ui/instancePicker.js";
import { renderRecourseTable, type SortState } from "./ui/recourseTable.js";
import { renderStatusBanner } from "./ui/statusBanner.js";
import { buildRequest } from "./validation.js";

const PAGE_SIZE = 10;

interface AppState {
  schema: Schema | null;
  page: InstancesPage | null;
  selected: InstanceRow | null;
  editor: EditorState;
  histories: Map<number, SessionHistory>;
  lastResponse: ExplainResponse | null;
  running: boolean;
  sort: SortState;
  error: string | null;
}

export function createApp(root: HTMLElement, client: ApiClient): { refresh: () => Promise<void> } {
  root.innerHTML = `
    <div id="banner"></div>
    <div class="layout">
      <section class="panel">
        <h2>test instances</h2>
        <div id="picker"></div>
      </section>
      <section class="panel">
        <h2>constraints & run</h2>
        <div id="editor"></div>
      </section>
    </div>
    <section class="panel">
      <h2>recourse</h2>
      <div id="table"></div>
      <h2>previous vs latest run</h2>
      <div id="compare"></div>
    </section>
  `;
  const bannerEl = root.querySelector<HTMLElement>("#banner")!;
  const pickerEl = root.querySelector<HTMLElement>("#picker")!;
  const editorEl = root.querySelector<HTMLElement>("#editor")!;
  const tableEl = root.querySelector<HTMLElement>("#table")!;
  const compareEl = root.querySelector<HTMLElement>("#compare")!;

  const state: AppState = {
    schema: null,
    page: null,
    selected: null,
    // constraint drafts persist across instance switches, keyed by feature
    editor: { drafts: new Map<string, ConstraintDraft>(), modules: new Set([1]), N: 10, seed: 0 },
    histories: new Map(),
    lastResponse: null,
    running: false,
    sort: { objective: null, descending: false },
    error: null,
  };

  function historyFor(index: number): SessionHistory {
    let history = state.histories.get(index);
    if (!history) {
      history = new SessionHistory();
      state.histories.set(index, history);
    }
    return history;
  }

  function render(): void {
    renderStatusBanner(bannerEl, state.error, () => void refresh());
    if (!state.schema) return;
    if (state.page) {
      renderInstancePicker(
        pickerEl,
        state.schema,
        state.page,
        {
          onSelect: (row) => {
            state.selected = row;
            state.lastResponse = null;
            render();
          },
          onPage: (offset) => void loadPage(offset),
        },
        state.selected?.index ?? null,
      );
    }
    renderConstraintEditor(
      editorEl,
      state.schema,
      state.editor,
      { onRun: () => void run(), onChange: render },
      state.running,
    );
    if (state.lastResponse) {
      renderRecourseTable(tableEl, state.schema, state.lastResponse, {
        drafts: [...state.editor.drafts.values()],
        sort: state.sort,
        onSort: (objective: ObjectiveName) => {
          state.sort =
            state.sort.objective === objective
              ? { objective, descending: !state.sort.descending }
              : { objective, descending: false };
          render();
        },
      });
      if (state.selected) {
        renderComparePanel(compareEl, historyFor(state.selected.index).lastTwo());
      }
    } else {
      tableEl.replaceChildren();
      compareEl.replaceChildren();
    }
  }

  async function loadPage(offset: number): Promise<void> {
    try {
      state.page = await client.instances(offset, PAGE_SIZE);
      state.error = null;
    } catch {
      state.error = "service unreachable while listing instances";
    }
    render();
  }

  async function run(): Promise<void> {
    if (!state.schema || !state.selected || state.running) return;
    const request = buildRequest(
      state.schema,
      {
        instance: { index: state.selected.index },
        modules: [...state.editor.modules].sort((a, b) => a - b),
        N: state.editor.N,
        seed: state.editor.seed,
      },
      [...state.editor.drafts.values()],
    );
    state.running = true;
    render();
    try {
      const response = await client.explain(request);
      historyFor(state.selected.index).append(request, response);
      state.lastResponse = response;
      state.error = null;
    } catch (err) {
      state.error = `explain failed: ${err instanceof Error ? err.message : String(err)}`;
    } finally {
      state.running = false;
      render();
    }
  }

  async function refresh(): Promise<void> {
    try {
      state.schema = await client.schema();
      state.editor.modules = new Set(state.schema.modules);
      state.error = null;
    } catch {
      state.error = "service unreachable - is `recourse serve` running?";
      render();
      return;
    }
    await loadPage(0);
  }

  return { refresh };
}

declare global {
  interface Window {
    __RECOURSE_TEST__?: boolean;
  }
}

if (typeof window !== "undefined" && !window.__RECOURSE_TEST__) {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "http://127.0.0.1:8000";
  const root = document.getElementById("app");
  if (root) {
    const app = createApp(root, new ApiClient(base));
    void app.refresh();
  }
}
