"""Tiny scriptable HTTP server for camera and estimator tests."""

import threading
import time
from contextlib import contextmanager
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class Script:
    """Routes requests to handler callables and records what arrived.

    Handlers map a path prefix to a callable (method, path, body) ->
    (status, content_type, payload_bytes), or to the string "hang" to sleep
    past any client timeout.
    """

    def __init__(self, routes):
        self.routes = routes
        self.requests = []


@contextmanager
def serve(script):
    class Handler(BaseHTTPRequestHandler):
        def _handle(self, method):
            length = int(self.headers.get("Content-Length", 0))
            body = self.rfile.read(length) if length else b""
            script.requests.append((method, self.path, body))
            for prefix, responder in script.routes.items():
                if self.path.startswith(prefix):
                    if responder == "hang":
                        time.sleep(2.0)
                        self.send_response(200)
                        self.end_headers()
                        return
                    status, ctype, payload = responder(method, self.path, body)
                    self.send_response(status)
                    self.send_header("Content-Type", ctype)
                    self.send_header("Content-Length", str(len(payload)))
                    self.end_headers()
                    self.wfile.write(payload)
                    return
            self.send_response(404)
            self.end_headers()

        def do_GET(self):
            self._handle("GET")

        def do_POST(self):
            self._handle("POST")

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_address[1]}"
    finally:
        server.shutdown()
        thread.join(timeout=5)


def fixed(status, ctype, payload):
    """A responder that always answers the same thing."""
    return lambda method, path, body: (status, ctype, payload)
