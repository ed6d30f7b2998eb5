from .protocol import (
    PROTOCOL_VERSION,
    ProtocolError,
    ack_message,
    decode_message,
    error_message,
    hello_message,
    telemetry_message,
)
from .service import LiveSession, create_app, serve

__all__ = [
    "LiveSession",
    "PROTOCOL_VERSION",
    "ProtocolError",
    "ack_message",
    "create_app",
    "decode_message",
    "error_message",
    "hello_message",
    "serve",
    "telemetry_message",
]
