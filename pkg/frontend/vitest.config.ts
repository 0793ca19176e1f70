import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["test/**/*.test.ts"],
    // The integration suite trains a model and boots the real service.
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
