import { defineConfig } from "vite";

// All API paths proxy to a locally running `bln serve` during development;
// the production bundle is served by the service itself (bln serve --ui dist).
const service = "http://127.0.0.1:8470";

export default defineConfig({
  server: {
    port: 5173,
    proxy: {
      "/corpora": service,
      "/sentences": service,
      "/agreement": service,
      "/reports": service,
      "/switchpoints": service,
    },
  },
  build: { outDir: "dist" },
});
