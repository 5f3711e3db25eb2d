/** Browser entry point: wire the explorer to the same-origin service. */

import { ApiClient } from "./api.js";
import { createExplorer } from "./app.js";

void createExplorer(new ApiClient("")).start();
