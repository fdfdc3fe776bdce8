import { createChatApp } from "./app";
import { gatewayUrl, WebSocketChannel } from "./connection";
import "./styles.css";

const root = document.getElementById("app");
if (root) {
  createChatApp(root, () => new WebSocketChannel(gatewayUrl()));
}
