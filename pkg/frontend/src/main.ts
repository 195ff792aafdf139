import { AnnotatorApp } from "./app.js";

// Service base URL: ?service=http://host:port, else same origin, else the
// default dev port.
const params = new URLSearchParams(window.location.search);
const baseUrl =
  params.get("service") ??
  (window.location.origin.startsWith("http")
    ? window.location.origin
    : "http://127.0.0.1:8080");

new AnnotatorApp(
  {
    canvas: document.getElementById("canvas") as HTMLCanvasElement,
    file: document.getElementById("file") as HTMLInputElement,
    undoBtn: document.getElementById("undo") as HTMLButtonElement,
    exportBtn: document.getElementById("export") as HTMLButtonElement,
    banner: document.getElementById("banner") as HTMLElement,
    status: document.getElementById("status") as HTMLElement,
  },
  baseUrl,
);
