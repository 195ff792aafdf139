"""
Driving the interactive session service
========================================

Starts the refinement service in-process, then plays a scripted annotator:
upload an image, click twice to get the first mask, add a corrective click,
undo it, and export the final mask — all through the public HTTP API.
"""

import base64
import io
import threading
import time

import numpy as np
import requests
import uvicorn
from PIL import Image

from contourseg.fixtures import render_image
from contourseg.service import create_app

PORT = 8731
BASE = f"http://127.0.0.1:{PORT}"

app = create_app(predictor_spec="baseline")
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=PORT,
                                       log_level="warning"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)

# Upload a rendered ellipse scene.
size = 300
ys, xs = np.mgrid[0:size, 0:size].astype(float)
gt = ((xs - 150) / 90) ** 2 + ((ys - 140) / 60) ** 2 <= 1.0
image = render_image(gt, np.random.default_rng(8))
buf = io.BytesIO()
Image.fromarray(image).save(buf, format="PNG")

r = requests.post(f"{BASE}/sessions",
                  json={"image": base64.b64encode(buf.getvalue()).decode()})
sid = r.json()["id"]
print("session:", sid)

def click(x, y):
    resp = requests.post(f"{BASE}/sessions/{sid}/clicks", json={"x": x, "y": y})
    body = resp.json()
    print(f"  click ({x},{y}) -> {body['clicks']} clicks, "
          f"mask={'yes' if body['mask'] else 'none'}")
    return body

print("two contour clicks:")
click(60, 140)
two = click(240, 140)

print("a corrective click on the top contour:")
three = click(150, 80)

print("undo:")
undone = requests.post(f"{BASE}/sessions/{sid}/undo").json()
print("  restored the 2-click mask bit-exactly:",
      undone["mask"] == two["mask"])

state = requests.get(f"{BASE}/sessions/{sid}").json()
mask = np.asarray(Image.open(io.BytesIO(base64.b64decode(state["mask"]))))
import os
out = __file__.replace("05_interactive_session.py", "output")
os.makedirs(out, exist_ok=True)
Image.fromarray(mask).save(f"{out}/exported_mask.png")
print(f"exported mask ({(mask > 0).sum()} px) -> {out}/exported_mask.png")

server.should_exit = True
thread.join(timeout=5)
