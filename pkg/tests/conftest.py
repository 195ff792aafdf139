import base64
import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest


def disk_mask(size, cx, cy, r):
    ys, xs = np.mgrid[0:size, 0:size].astype(float)
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= r * r


def ring_mask(size, cx, cy, r_outer, r_inner):
    return disk_mask(size, cx, cy, r_outer) & ~disk_mask(size, cx, cy, r_inner)


class _WireHandler(BaseHTTPRequestHandler):
    """Configurable predictor stub: echo the heatmap, or misbehave."""

    behavior = "echo"
    delay = 0.0

    def do_POST(self):
        if self.delay:
            time.sleep(self.delay)
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length)
        if self.behavior == "echo":
            payload = json.loads(raw)
            body = json.dumps({"probs": payload["heatmap"]}).encode()
            self._reply(200, body)
        elif self.behavior == "wrong_size":
            import io
            from PIL import Image
            buf = io.BytesIO()
            Image.fromarray(np.zeros((10, 10), np.uint8), mode="L").save(buf, "PNG")
            body = json.dumps(
                {"probs": base64.b64encode(buf.getvalue()).decode()}).encode()
            self._reply(200, body)
        elif self.behavior == "garbage":
            self._reply(200, b"this is not json {{{")
        elif self.behavior == "missing_key":
            self._reply(200, json.dumps({"something": "else"}).encode())
        elif self.behavior == "http_error":
            self._reply(500, b"boom")
        else:
            raise AssertionError(self.behavior)

    def _reply(self, status, body):
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


class WireServer:
    def __init__(self, behavior="echo", delay=0.0):
        handler = type("Handler", (_WireHandler,),
                       {"behavior": behavior, "delay": delay})
        self.httpd = ThreadingHTTPServer(("127.0.0.1", 0), handler)
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    @property
    def endpoint(self):
        host, port = self.httpd.server_address
        return f"http://{host}:{port}"

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.httpd.shutdown()
        self.httpd.server_close()
        return False


@pytest.fixture
def wire_server_factory():
    servers = []

    def make(behavior="echo", delay=0.0):
        s = WireServer(behavior, delay)
        s.__enter__()
        servers.append(s)
        return s

    yield make
    for s in servers:
        s.__exit__()
