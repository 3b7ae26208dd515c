import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // The walkthrough test boots the Python service from a cold start.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
