// Button enablement is a pure function of (acquisition status, archive
// emptiness) so it can be tested without any DOM.

export type ButtonId =
  | "display"
  | "stop"
  | "save"
  | "delete"
  | "experiment"
  | "clear";

export interface UiState {
  running: boolean;
  archiveEmpty: boolean;
}

export function buttonEnabled(button: ButtonId, state: UiState): boolean {
  switch (button) {
    case "display":
      return !state.running; // starting twice conflicts server-side
    case "stop":
      return state.running;
    case "save":
      return true; // server rejects an empty live table itself
    case "delete":
      return !state.running; // server refuses DELETE /live while running
    case "experiment":
      return !state.archiveEmpty;
    case "clear":
      return !state.archiveEmpty;
  }
}

export function enablementMatrix(state: UiState): Record<ButtonId, boolean> {
  const ids: ButtonId[] = ["display", "stop", "save", "delete", "experiment", "clear"];
  const out = {} as Record<ButtonId, boolean>;
  for (const id of ids) out[id] = buttonEnabled(id, state);
  return out;
}
