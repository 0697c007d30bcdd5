// End-to-end round trip against the real review server: build the replay
// dataset from the committed fixture, start `taxoscope review`, rate three
// items through the HTTP API the UI uses, and check the summary the panel
// would display. Re-rating must move counts between buckets.

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";

const REPO_ROOT = fileURLToPath(new URL("../..", import.meta.url));
const FIXTURE = join(REPO_ROOT, "tests", "fixtures", "anchored");

const port = 18000 + Math.floor(Math.random() * 10000);
const base = `http://127.0.0.1:${port}`;
const api = new ReviewApi(base);
const reviewer = "roundtrip";

let workDir: string;
let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${base}/api/summary`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("review server did not come up");
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "taxoscope-ui-"));

  const characterize = spawnSync(
    "taxoscope",
    [
      "characterize",
      "--corpus", join(FIXTURE, "corpus"),
      "--out", join(workDir, "run"),
      "--mode", "replay",
      "--model", "fixture-model",
      "--cache-dir", join(FIXTURE, "cache"),
    ],
    { encoding: "utf-8" },
  );
  expect(characterize.status, characterize.stderr).toBe(0);

  server = spawn(
    "taxoscope",
    [
      "review",
      "--corpus", join(FIXTURE, "corpus"),
      "--dataset", join(workDir, "run", "characterizations.jsonl"),
      "--out", join(workDir, "review"),
      "--port", String(port),
      "--ui-dir", join(REPO_ROOT, "frontend", "dist"),
    ],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 60000);

afterAll(() => {
  server?.kill("SIGINT");
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

describe("review UI round trip", () => {
  it("serves the built UI as static assets", async () => {
    const index = await fetch(`${base}/`);
    expect(index.status).toBe(200);
    expect(await index.text()).toContain('<div id="app"');
    const script = await fetch(`${base}/main.js`);
    expect(script.status).toBe(200);
  });

  it("pages the fixture queue with the manifest's unit count", async () => {
    const page = await api.getQueue(0, 10);
    expect(page.total).toBe(21);
    expect(page.items).toHaveLength(10);
    const rest = await api.getQueue(20, 10);
    expect(rest.items).toHaveLength(1);
  });

  it("summary reflects three submitted ratings", async () => {
    const page = await api.getQueue(0, 3);
    const [a, b, c] = page.items;

    await api.putAssessment(a.unit_id, 3, reviewer);
    await api.putAssessment(b.unit_id, 2, reviewer);
    await api.putAssessment(c.unit_id, 0, reviewer);

    const summary = await api.getSummary();
    expect(summary.counts).toEqual({
      entirely_plausible: 1,
      largely_plausible: 1,
      somewhat_plausible: 0,
      implausible: 1,
    });
    expect(summary.total).toBe(3);
    expect(summary.at_least_somewhat).toBe(2);
    // (3 + 2 + 0) / 3, formatted by the server
    expect(summary.average).toBe("1.66");

    // the stored assessment comes back on the item, as the badge logic needs
    const item = await api.getItem(a.unit_id);
    const mine = item.assessments.find((x) => x.reviewer === reviewer);
    expect(mine?.rating).toBe(3);
  });

  it("re-rating moves counts between buckets (last write wins)", async () => {
    const page = await api.getQueue(0, 3);
    const c = page.items[2];

    await api.putAssessment(c.unit_id, 3, reviewer);

    const summary = await api.getSummary();
    expect(summary.counts.implausible).toBe(0);
    expect(summary.counts.entirely_plausible).toBe(2);
    expect(summary.total).toBe(3);
    expect(summary.average).toBe("2.66");
  });
});
