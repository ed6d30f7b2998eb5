// WebSocket connection wrapper; host/port come from URL query parameters.

import { ConsoleViewModel } from "./model.js";
import { ClientMsg, parseServerMsg } from "./protocol.js";

export function bridgeUrl(search: string): string {
  const params = new URLSearchParams(search);
  const host = params.get("host") ?? "127.0.0.1";
  const port = params.get("port") ?? "8765";
  return `ws://${host}:${port}/ws`;
}

export class Connection {
  private ws: WebSocket | null = null;

  constructor(private vm: ConsoleViewModel) {}

  open(url: string): void {
    this.ws = new WebSocket(url);
    this.ws.onopen = () => this.vm.onConnect();
    this.ws.onclose = () => this.vm.onDisconnect();
    this.ws.onerror = () => this.vm.onDisconnect();
    this.ws.onmessage = (ev: MessageEvent) => {
      const msg = parseServerMsg(String(ev.data));
      if (msg !== null) this.vm.applyMessage(msg, performance.now());
    };
  }

  send = (msg: ClientMsg): void => {
    if (this.ws !== null && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(msg));
    }
  };
}
