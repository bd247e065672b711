import type { Classification, ReportRow, ReviewItem } from "./types.js";
import { ReviewSession, SessionState } from "./session.js";

// Presentation only: values come from the API payload verbatim, the UI
// never recomputes a feature. Highlighting marks display strings that
// correspond to a shared canonical name or DOI.

function el(tag: string, className = "", text = ""): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function matchesCommonName(display: string, commonNames: string[]): boolean {
  const lower = display.toLowerCase();
  return commonNames.some((canonical) => {
    const last = canonical.split(",")[0].trim();
    return last.length > 0 && lower.includes(last);
  });
}

function nameList(title: string, names: string[], commonNames: string[]): HTMLElement {
  const box = el("div", "name-list");
  box.appendChild(el("h4", "", title));
  const ul = el("ul");
  for (const name of names) {
    ul.appendChild(el("li", matchesCommonName(name, commonNames) ? "shared" : "", name));
  }
  box.appendChild(ul);
  return box;
}

function featureRow(label: string, value: string, shared = false): HTMLElement {
  const row = el("div", shared ? "feature shared" : "feature");
  row.appendChild(el("span", "feature-label", label));
  row.appendChild(el("span", "feature-value", value));
  return row;
}

export function renderCard(item: ReviewItem): HTMLElement {
  const card = el("div", "card");

  const pub = el("div", "side publication");
  pub.appendChild(el("h3", "", item.publication.title || item.pub_id));
  pub.appendChild(el("p", "meta", `published ${item.publication.date}`));
  if (item.publication.doi) {
    pub.appendChild(featureRow("DOI", item.publication.doi));
  }
  pub.appendChild(nameList("Authors", item.publication.authors, item.common_names));
  pub.appendChild(nameList("Headings", item.publication.mesh_headings, []));

  const pat = el("div", "side patent");
  pat.appendChild(el("h3", "", item.patent.title || item.family_id));
  pat.appendChild(el("p", "meta", `${item.patent.family_id}, filed ${item.patent.filing_date}`));
  pat.appendChild(nameList("Inventors", item.patent.inventors, item.common_names));
  pat.appendChild(nameList("Applicants", item.patent.applicants, []));
  pat.appendChild(nameList("IPC", item.patent.ipc_codes, []));

  const features = el("div", "features");
  features.appendChild(featureRow("common names", String(item.features.n_common_names), true));
  for (const name of item.common_names) {
    features.appendChild(el("span", "chip shared", name));
  }
  features.appendChild(featureRow(
    "common references",
    item.features.n_common_refs === null ? "-" : String(item.features.n_common_refs),
    (item.features.n_common_refs ?? 0) > 0,
  ));
  for (const doi of item.common_dois) {
    features.appendChild(el("span", "chip shared", doi));
  }
  features.appendChild(featureRow(
    "cosine",
    item.features.cosine === null ? "-" : String(item.features.cosine),
  ));
  features.appendChild(featureRow("academic", String(item.features.academic)));

  card.appendChild(pub);
  card.appendChild(pat);
  card.appendChild(features);
  return card;
}

export function renderReport(rows: ReportRow[]): HTMLElement {
  const table = el("table", "report");
  const head = el("tr");
  for (const col of ["common names", "reviewed", "valid", "invalid", "not determinable"]) {
    head.appendChild(el("th", "", col));
  }
  table.appendChild(head);
  for (const row of rows) {
    const tr = el("tr");
    tr.appendChild(el("td", "", String(row.n_common_names)));
    tr.appendChild(el("td", "", String(row.reviewed)));
    tr.appendChild(el("td", "", row.valid_fraction.toFixed(3)));
    tr.appendChild(el("td", "", row.invalid_fraction.toFixed(3)));
    tr.appendChild(el("td", "", row.not_determinable_fraction.toFixed(3)));
    table.appendChild(tr);
  }
  return table;
}

const SHORTCUTS: Record<string, Classification> = {
  v: "valid_pair",
  n: "no_valid_pair",
  d: "not_determinable",
};

export function mountApp(root: HTMLElement, session: ReviewSession): void {
  const tabs = el("div", "tabs");
  const progress = el("div", "progress");
  const errorBox = el("div", "error hidden");
  const errorText = el("span", "error-text");
  const retryButton = el("button", "retry", "retry");
  errorBox.appendChild(errorText);
  errorBox.appendChild(retryButton);
  const cardHost = el("div", "card-host");
  const buttons = el("div", "verdict-buttons");
  const reportHost = el("div", "report-host");

  const labels: Array<[Classification, string]> = [
    ["valid_pair", "valid pair (v)"],
    ["no_valid_pair", "no valid pair (n)"],
    ["not_determinable", "not determinable (d)"],
  ];
  for (const [classification, label] of labels) {
    const button = el("button", `verdict ${classification}`, label);
    button.addEventListener("click", () => void session.submit(classification));
    buttons.appendChild(button);
  }

  retryButton.addEventListener("click", () => void session.flushQueue());
  document.addEventListener("keydown", (event) => {
    const classification = SHORTCUTS[event.key];
    if (classification && !session.done()) {
      void session.submit(classification);
    }
  });

  session.onChange((state: SessionState) => {
    progress.textContent =
      `${Math.min(state.index, state.items.length)}/${state.items.length} reviewed` +
      (state.queueLength > 0 ? ` (${state.queueLength} queued for retry)` : "");

    tabs.replaceChildren();
    for (const stratum of session.strata()) {
      const tab = el("button", "tab", `${stratum.k} names: ${stratum.position}/${stratum.total}`);
      tab.addEventListener("click", () => session.jumpToStratum(stratum.k));
      tabs.appendChild(tab);
    }

    errorBox.classList.toggle("hidden", state.error === null);
    errorText.textContent = state.error ?? "";

    cardHost.replaceChildren();
    const item = session.current();
    if (item) {
      cardHost.appendChild(renderCard(item));
    } else if (session.done()) {
      cardHost.appendChild(el("p", "done", "sample finished - thank you"));
    }

    reportHost.replaceChildren(renderReport(state.report));
  });

  root.replaceChildren(tabs, progress, errorBox, cardHost, buttons, reportHost);
}
