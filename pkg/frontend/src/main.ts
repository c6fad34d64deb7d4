import { createApp } from "./app.ts";
import "./style.css";

createApp(document.getElementById("app")!);
