// DOM rendering of one report. Pure: everything shown comes from the report
// argument; the handlers wire user intent back to the session controller.

import {
  Domain,
  FactValue,
  Report,
  Role,
  SCHEMA_VERSION,
  SymbolEntry,
  formatValue,
} from "./types.js";

export interface RenderHandlers {
  onEnter(symbol: string, value: FactValue, role: Role): void;
  onVerify(symbol: string, value: FactValue): void;
  onRetract(symbol: string): void;
}

const GROUPS: { title: string; statuses: string[]; className: string }[] = [
  {
    title: "Given",
    statuses: ["given_observation", "given_decision"],
    className: "group-given",
  },
  {
    title: "Propagated",
    statuses: ["safe_consequence", "to_verify", "decision_consequence"],
    className: "group-propagated",
  },
  {
    title: "Open questions",
    statuses: ["relevant_unknown"],
    className: "group-unknown",
  },
  {
    title: "Not needed",
    statuses: ["irrelevant"],
    className: "group-irrelevant",
  },
];

export function renderReport(
  container: HTMLElement,
  report: Report,
  handlers: RenderHandlers,
): void {
  container.textContent = "";
  if (report.schema !== SCHEMA_VERSION) {
    const error = document.createElement("div");
    error.className = "schema-error";
    error.setAttribute("role", "alert");
    error.textContent =
      `This client speaks ${SCHEMA_VERSION} but the server sent ` +
      `${report.schema}; please reload or upgrade.`;
    container.appendChild(error);
    return;
  }

  if (!report.satisfiable) {
    const warning = document.createElement("div");
    warning.className = "no-solution";
    warning.setAttribute("role", "alert");
    warning.textContent = report.message ?? "There is no solution to this problem.";
    container.appendChild(warning);
  }

  container.appendChild(renderBanners(report));

  for (const group of GROUPS) {
    const entries = report.symbols.filter((s) => group.statuses.includes(s.status));
    if (!entries.length) continue;
    const section = document.createElement("section");
    section.className = "group " + group.className;
    const heading = document.createElement("h2");
    heading.textContent = group.title;
    section.appendChild(heading);
    for (const entry of entries) {
      section.appendChild(renderCard(entry, handlers));
    }
    container.appendChild(section);
  }
}

function renderBanners(report: Report): HTMLElement {
  const banners = document.createElement("div");
  banners.className = "banners";
  if (report.banners.definite) {
    banners.appendChild(
      banner(
        "banner-definite",
        "Definite solution: whatever the remaining facts turn out to be, " +
          "the current choices work. You can stop here.",
      ),
    );
  } else if (report.banners.contingent) {
    banners.appendChild(
      banner(
        "banner-contingent",
        "Contingent solution: a valid completion exists in every remaining " +
          "environment; decisions can be finished later.",
      ),
    );
  }
  return banners;
}

function banner(className: string, text: string): HTMLElement {
  const node = document.createElement("div");
  node.className = "banner " + className;
  node.textContent = text;
  return node;
}

function renderCard(entry: SymbolEntry, handlers: RenderHandlers): HTMLElement {
  const card = document.createElement("article");
  card.className = "card status-" + entry.status;
  if (entry.status === "irrelevant") card.className += " muted";
  card.dataset.symbol = entry.name;
  card.dataset.status = entry.status;

  const header = document.createElement("header");
  const badge = document.createElement("span");
  badge.className = "badge badge-" + entry.kind;
  badge.textContent = entry.kind === "env" ? "environment" : "decision";
  const title = document.createElement("h3");
  title.textContent = entry.name;
  header.append(badge, title);
  card.appendChild(header);

  if (entry.value !== undefined) {
    const value = document.createElement("div");
    value.className = "value";
    value.textContent = formatValue(entry.value);
    card.appendChild(value);
  }

  const actions = document.createElement("div");
  actions.className = "actions";
  switch (entry.status) {
    case "given_observation":
    case "given_decision": {
      const retract = document.createElement("button");
      retract.className = "retract";
      retract.textContent = "retract";
      retract.addEventListener("click", () => handlers.onRetract(entry.name));
      actions.appendChild(retract);
      break;
    }
    case "to_verify": {
      const note = document.createElement("p");
      note.className = "verify-note";
      note.textContent =
        "Hypothesis of your decisions; check it in the real world before relying on it.";
      card.appendChild(note);
      const verify = document.createElement("button");
      verify.className = "verify";
      verify.textContent = "verified, record as observation";
      verify.addEventListener("click", () =>
        handlers.onVerify(entry.name, entry.value as FactValue),
      );
      actions.appendChild(verify);
      // The real world may disagree with the hypothesis; recording the
      // contradicting value is what triggers the retraction dialog.
      const widget = buildWidget(entry.domain);
      widget.root.className = "widget widget-contradict";
      card.appendChild(widget.root);
      const observe = document.createElement("button");
      observe.className = "enter";
      observe.textContent = "observed otherwise";
      observe.addEventListener("click", () =>
        handlers.onEnter(entry.name, widget.read(), "observation"),
      );
      actions.appendChild(observe);
      break;
    }
    case "relevant_unknown":
    case "irrelevant": {
      const widget = buildWidget(entry.domain);
      widget.root.className = "widget";
      card.appendChild(widget.root);
      const enter = document.createElement("button");
      enter.className = "enter";
      enter.textContent = entry.kind === "env" ? "observe" : "decide";
      enter.addEventListener("click", () => {
        handlers.onEnter(
          entry.name,
          widget.read(),
          entry.kind === "env" ? "observation" : "decision",
        );
      });
      actions.appendChild(enter);
      break;
    }
    default:
      // safe_consequence / decision_consequence: display only.
      break;
  }
  if (actions.childNodes.length) card.appendChild(actions);
  return card;
}

interface Widget {
  root: HTMLElement;
  read(): FactValue;
}

function buildWidget(domain: Domain): Widget {
  if (domain.type === "bool") {
    const root = document.createElement("label");
    const input = document.createElement("input");
    input.type = "checkbox";
    root.append(input, document.createTextNode(" true"));
    return { root, read: () => input.checked };
  }
  if (domain.type === "enum") {
    const root = document.createElement("span");
    const select = document.createElement("select");
    for (const name of domain.values) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      select.appendChild(option);
    }
    root.appendChild(select);
    return { root, read: () => select.value };
  }
  const root = document.createElement("span");
  const input = document.createElement("input");
  input.type = "number";
  input.min = String(domain.lo);
  input.max = String(domain.hi);
  input.value = String(domain.lo);
  root.appendChild(input);
  return { root, read: () => Number(input.value) };
}
