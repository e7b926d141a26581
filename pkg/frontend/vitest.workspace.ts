import { defineWorkspace } from "vitest/config";

export default defineWorkspace([
  {
    test: {
      name: "unit",
      environment: "jsdom",
      include: ["tests/unit/**/*.test.ts", "tests/contract/**/*.test.ts"],
    },
  },
  {
    // Drives the real HTTP service; requires the Python package on PATH.
    test: {
      name: "e2e",
      environment: "jsdom",
      include: ["tests/e2e/**/*.test.ts"],
      globalSetup: ["tests/e2e/global_setup.ts"],
      testTimeout: 30_000,
      hookTimeout: 120_000,
      fileParallelism: false,
    },
  },
]);
