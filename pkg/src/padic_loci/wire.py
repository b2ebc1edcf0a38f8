"""Newline-delimited JSON oracle protocol.

A request is {"id": n, "point": <element>}; the answer is {"id": n, "member":
true|false}, or {"id": n, "error": "..."} when the request cannot be served.
Points use the element encoding of padic.PadicElement.to_json.
"""

import json
import queue
import shlex
import socket
import socketserver
import subprocess
import threading
from fractions import Fraction

from . import padic as pa
from .oracles import MembershipOracle, SyntheticOracle


class ProtocolError(RuntimeError):
    def __init__(self, message, frame_id=None):
        super().__init__(message)
        self.frame_id = frame_id


class OracleTimeout(ProtocolError):
    pass


def dump_frame(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def encode_request(frame_id, x):
    return dump_frame({"id": frame_id, "point": x.to_json()})


def encode_response(frame_id, member):
    return dump_frame({"id": frame_id, "member": bool(member)})


def encode_error(frame_id, message):
    return dump_frame({"id": frame_id, "error": message})


def _load(line):
    try:
        obj = json.loads(line)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError("malformed frame: %s" % exc)
    if not isinstance(obj, dict):
        raise ProtocolError("frame must be a JSON object")
    return obj


def decode_request(line):
    obj = _load(line)
    frame_id = obj.get("id")
    unknown = set(obj) - {"id", "point"}
    if unknown:
        raise ProtocolError("unknown fields %s" % sorted(unknown), frame_id)
    if "id" not in obj or not isinstance(frame_id, (int, str)) or isinstance(frame_id, bool):
        raise ProtocolError("request needs an integer or string id", frame_id)
    if "point" not in obj:
        raise ProtocolError("request needs a point", frame_id)
    try:
        x = pa.PadicElement.from_json(obj["point"])
    except (pa.PadicError, KeyError, TypeError, ValueError) as exc:
        raise ProtocolError("bad point: %s" % exc, frame_id)
    return frame_id, x


def decode_response(line):
    obj = _load(line)
    frame_id = obj.get("id")
    if "error" in obj:
        raise ProtocolError("oracle error: %s" % obj["error"], frame_id)
    unknown = set(obj) - {"id", "member"}
    if unknown:
        raise ProtocolError("unknown fields %s" % sorted(unknown), frame_id)
    member = obj.get("member")
    if not isinstance(member, bool):
        raise ProtocolError("response needs a boolean member field", frame_id)
    return frame_id, member


# serving

def answer_line(oracle, line):
    """The response frame for one request line (errors become error frames)."""
    try:
        frame_id, x = decode_request(line)
    except ProtocolError as exc:
        return encode_error(exc.frame_id, str(exc))
    try:
        return encode_response(frame_id, oracle.query(x))
    except (pa.PadicError, ArithmeticError) as exc:
        return encode_error(frame_id, str(exc))


def serve_stream(oracle, rfile, wfile):
    """Answer requests line by line until end of input; returns the count."""
    count = 0
    for line in rfile:
        if not line.strip():
            continue
        wfile.write(answer_line(oracle, line) + "\n")
        wfile.flush()
        count += 1
    return count


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        rfile = (line.decode("utf-8", "replace") for line in self.rfile)
        w = _TextWriter(self.wfile)
        self.server.count += serve_stream(self.server.oracle, rfile, w)


class _TextWriter:
    def __init__(self, raw):
        self.raw = raw

    def write(self, s):
        self.raw.write(s.encode("utf-8"))

    def flush(self):
        self.raw.flush()


class OracleServer(socketserver.TCPServer):
    """TCP endpoint serving one connection at a time."""
    allow_reuse_address = True

    def __init__(self, oracle, host="127.0.0.1", port=0):
        super().__init__((host, port), _Handler)
        self.oracle = oracle
        self.count = 0

    @property
    def address(self):
        host, port = self.server_address[:2]
        return "%s:%d" % (host, port)


# client side

class _LineReader:
    """Reads lines on a background thread so that waits can time out."""

    def __init__(self, stream):
        self.lines = queue.Queue()
        t = threading.Thread(target=self._pump, args=(stream,), daemon=True)
        t.start()

    def _pump(self, stream):
        try:
            for line in stream:
                self.lines.put(line)
        finally:
            self.lines.put(None)

    def readline(self, timeout):
        try:
            line = self.lines.get(timeout=timeout)
        except queue.Empty:
            raise OracleTimeout("oracle did not answer within %.1f s" % timeout)
        if line is None:
            raise ProtocolError("oracle closed the connection")
        return line


class WireOracle(MembershipOracle):
    """Forwards queries over a text stream pair and caches the answers."""

    def __init__(self, rfile, wfile, epsilon=None, timeout=30.0, closer=None):
        self.reader = _LineReader(rfile)
        self.wfile = wfile
        self.epsilon = None if epsilon is None else Fraction(epsilon)
        self.timeout = timeout
        self.lock = threading.Lock()
        self.cache = {}
        self.next_id = 0
        self._closer = closer

    def query(self, x):
        key = x.key()
        with self.lock:
            if key in self.cache:
                return self.cache[key]
            self.next_id += 1
            frame_id = self.next_id
            self.wfile.write(encode_request(frame_id, x) + "\n")
            self.wfile.flush()
            got_id, member = decode_response(self.reader.readline(self.timeout))
            if got_id != frame_id:
                raise ProtocolError("response id %r does not match request %r" % (got_id, frame_id),
                                    got_id)
            self.cache[key] = member
            return member

    def close(self):
        if self._closer is not None:
            self._closer()
            self._closer = None


def exec_oracle(command, epsilon=None, timeout=30.0):
    args = shlex.split(command) if isinstance(command, str) else list(command)
    proc = subprocess.Popen(args, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                            text=True, bufsize=1)

    def closer():
        proc.stdin.close()
        try:
            proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            proc.kill()
    return WireOracle(proc.stdout, proc.stdin, epsilon, timeout, closer)


def socket_oracle(address, epsilon=None, timeout=30.0):
    host, _, port = address.rpartition(":")
    sock = socket.create_connection((host or "127.0.0.1", int(port)), timeout=timeout)
    sock.settimeout(None)
    rfile = sock.makefile("r", encoding="utf-8")
    wfile = sock.makefile("w", encoding="utf-8")

    def closer():
        # shutting down first ends the reader thread's pending read
        try:
            wfile.close()
            sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        sock.close()
    return WireOracle(rfile, wfile, epsilon, timeout, closer)


def open_oracle(spec, epsilon=None, timeout=30.0):
    """exec:<command>, serve:<host:port> or file:<subset.json>."""
    kind, _, rest = spec.partition(":")
    if not rest:
        raise ValueError("oracle spec must look like exec:<cmd>, serve:<addr> or file:<path>")
    if kind == "exec":
        return exec_oracle(rest, epsilon, timeout)
    if kind == "serve":
        return socket_oracle(rest, epsilon, timeout)
    if kind == "file":
        from .crystalline import locus_from_json
        with open(rest) as fh:
            X = locus_from_json(json.load(fh))
        return SyntheticOracle(X, epsilon)
    raise ValueError("unknown oracle kind %r" % kind)
