import { TriageApi } from "./api.js";
import { TriageApp } from "./app.js";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
const app = new TriageApp(root, new TriageApi(""));
void app.start();
