import { ApiClient } from "./api";
import { renderAgreement, renderHelp, renderQueue, renderSentence } from "./render";
import { ReviewSession } from "./state";
import "./styles.css";

function annotatorId(): string {
  let id = localStorage.getItem("annotator_id");
  if (!id) {
    id = window.prompt("Annotator id:", "annotator") || "anonymous";
    localStorage.setItem("annotator_id", id);
  }
  return id;
}

const api = new ApiClient(annotatorId());
const session = new ReviewSession(api);

const nav = document.getElementById("nav")!;
const view = document.getElementById("view")!;

async function renderHome(): Promise<void> {
  view.replaceChildren();
  const heading = document.createElement("h2");
  heading.textContent = "Corpora";
  view.append(heading);
  const list = document.createElement("ul");
  for (const corpus of await api.corpora()) {
    const item = document.createElement("li");
    const link = document.createElement("a");
    link.href = `#/queue/${corpus.id}`;
    const counts = Object.entries(corpus.status_counts)
      .map(([status, n]) => `${n} ${status.toLowerCase()}`)
      .join(", ");
    link.textContent = `${corpus.id} — ${corpus.n_sentences} sentences (${counts})`;
    item.append(link);
    if (corpus.has_gold) {
      const gold = document.createElement("span");
      gold.className = "muted";
      gold.textContent = " · gold reference loaded";
      item.append(gold);
    }
    list.append(item);
  }
  view.append(list);
}

async function route(): Promise<void> {
  const hash = window.location.hash || "#/";
  const [, page, ...rest] = hash.split("/");
  try {
    if (page === "queue" && rest[0]) {
      await renderQueue(view, api, rest[0], (sentId) => {
        window.location.hash = `#/sentence/${sentId}`;
      });
    } else if (page === "sentence" && rest[0]) {
      await session.load(decodeURIComponent(rest[0]));
      renderSentence(view, session);
    } else if (page === "agreement") {
      const params = new URLSearchParams(hash.split("?")[1] ?? "");
      await renderAgreement(
        view, api,
        params.get("corpus_id") ?? "",
        params.get("a") ?? "ann_a",
        params.get("b") ?? "ann_b",
        params.get("field") ?? "DEPREL",
      );
    } else if (page === "help") {
      renderHelp(view);
    } else {
      await renderHome();
    }
  } catch (err) {
    view.replaceChildren();
    const notice = document.createElement("p");
    notice.className = "notice rejected";
    notice.textContent = String(err);
    view.append(notice);
  }
}

nav.innerHTML = `
  <a href="#/">corpora</a>
  <a href="#/agreement">agreement</a>
  <a href="#/help">help</a>
  <span class="muted">annotator: ${api.annotatorId}</span>
`;

window.addEventListener("hashchange", route);
route();
