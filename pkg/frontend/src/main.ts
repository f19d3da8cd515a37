import { VisualizeClient } from "./api.js";
import { Studio } from "./studio.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const studio = new Studio(root, new VisualizeClient());
studio.start();
