// Entry point: wires the static page to the Dashboard controller.

import { Dashboard, PanelElements } from "./panels";
import { ButtonId } from "./state";

function panel(prefix: string): PanelElements {
  return {
    chart: document.getElementById(`${prefix}-chart`) as unknown as SVGSVGElement,
    maxLabel: document.getElementById(`${prefix}-max`)!,
    timeLabel: document.getElementById(`${prefix}-time`)!,
  };
}

const ids: ButtonId[] = ["display", "stop", "save", "delete", "experiment", "clear"];
const buttons = {} as Record<ButtonId, HTMLButtonElement>;
for (const id of ids) {
  buttons[id] = document.getElementById(`btn-${id}`) as HTMLButtonElement;
}

const dash = new Dashboard(
  panel("current"),
  panel("past"),
  buttons,
  document.getElementById("banner")!,
  document.getElementById("toast")!,
);

for (const id of ids) {
  buttons[id].addEventListener("click", () => void dash.dispatch(id));
}

void dash.init();
