import { App } from "./app.js";
import { HttpPlanningApi } from "./api.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
const app = new App(new HttpPlanningApi(), root);
app.render();
void app.init();
