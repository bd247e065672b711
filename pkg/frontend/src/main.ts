import { ApiClient } from "./api.js";
import { VerdictQueue } from "./queue.js";
import { ReviewSession } from "./session.js";
import { mountApp } from "./ui.js";

function reviewerId(): string {
  let id = localStorage.getItem("patlink_reviewer_id");
  if (!id) {
    id = window.prompt("reviewer id?", "reviewer") || "reviewer";
    localStorage.setItem("patlink_reviewer_id", id);
  }
  return id;
}

function sampleParams(): { perStratum: number; seed: number } {
  const params = new URLSearchParams(window.location.search);
  return {
    perStratum: Number(params.get("per_stratum") ?? "10"),
    seed: Number(params.get("seed") ?? "1"),
  };
}

const api = new ApiClient("");
const queue = new VerdictQueue(window.localStorage);
const session = new ReviewSession(api, queue, reviewerId());

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");
mountApp(root, session);

// retry queued verdicts when connectivity returns, and periodically
window.addEventListener("online", () => void session.flushQueue());
window.setInterval(() => void session.flushQueue(), 15000);

const { perStratum, seed } = sampleParams();
void session.loadSample(perStratum, seed);
