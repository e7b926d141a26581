/**
 * Boots a real review service for the end-to-end suite: seeds a fixture
 * store with the Python package, serves it with the installed CLI, and
 * tears both down afterwards.  Requires `python3` and `onomast` on PATH.
 */

import { ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { AddressInfo, createServer } from "node:net";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import type { GlobalSetupContext } from "vitest/node";
import { FixtureManifest } from "./fixture_types";

const hereDir = dirname(fileURLToPath(import.meta.url));

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const port = (probe.address() as AddressInfo).port;
      probe.close(() => resolve(port));
    });
  });
}

async function waitUntilReady(url: string, child: ChildProcess): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) {
      throw new Error(`review service exited early with code ${child.exitCode}`);
    }
    try {
      const response = await fetch(`${url}/queue?limit=1`);
      if (response.ok) {
        return;
      }
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`review service did not become ready at ${url}`);
}

function waitForExit(child: ChildProcess): Promise<void> {
  return new Promise((resolve) => {
    const force = setTimeout(() => {
      child.kill("SIGKILL");
    }, 5_000);
    child.once("exit", () => {
      clearTimeout(force);
      resolve();
    });
  });
}

export default async function setup({ provide }: GlobalSetupContext): Promise<() => Promise<void>> {
  const workDir = mkdtempSync(join(tmpdir(), "review-e2e-"));
  const storePath = join(workDir, "store.sqlite");
  let manifest: FixtureManifest;
  try {
    const stdout = execFileSync("python3", [join(hereDir, "seed_store.py"), storePath], {
      encoding: "utf-8",
    });
    manifest = JSON.parse(stdout) as FixtureManifest;
  } catch (err) {
    rmSync(workDir, { recursive: true, force: true });
    throw new Error(
      `seeding the fixture store failed (is the Python package installed?): ${err}`,
    );
  }

  const port = await freePort();
  const url = `http://127.0.0.1:${port}`;
  const child = spawn(
    "onomast",
    ["serve", "--store", storePath, "--host", "127.0.0.1", "--port", String(port)],
    { stdio: ["ignore", "inherit", "inherit"] },
  );
  try {
    await waitUntilReady(url, child);
  } catch (err) {
    child.kill("SIGKILL");
    rmSync(workDir, { recursive: true, force: true });
    throw err;
  }

  provide("reviewApiUrl", url);
  provide("fixture", manifest);

  return async () => {
    child.kill("SIGTERM");
    await waitForExit(child);
    rmSync(workDir, { recursive: true, force: true });
  };
}
