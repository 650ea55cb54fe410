/**
 * Keyboard-first bindings: space toggles the screenshot pair, digits pick
 * categories, enter submits, m flips the diff mask, arrows move the queue.
 */

export type Action =
  | { kind: 'toggle-side' }
  | { kind: 'toggle-mask' }
  | { kind: 'toggle-category'; digit: number }
  | { kind: 'submit' }
  | { kind: 'next' }
  | { kind: 'prev' };

export function actionForKey(key: string): Action | null {
  if (key === ' ' || key === 'Spacebar') {
    return { kind: 'toggle-side' };
  }
  if (key === 'm' || key === 'M') {
    return { kind: 'toggle-mask' };
  }
  if (key >= '1' && key <= '9' && key.length === 1) {
    return { kind: 'toggle-category', digit: Number(key) };
  }
  if (key === 'Enter') {
    return { kind: 'submit' };
  }
  if (key === 'ArrowRight' || key === 'j') {
    return { kind: 'next' };
  }
  if (key === 'ArrowLeft' || key === 'k') {
    return { kind: 'prev' };
  }
  return null;
}
