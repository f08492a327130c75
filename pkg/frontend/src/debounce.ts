/** Debounce with injectable timers so tests stay deterministic. */

export interface Timers {
  set: (fn: () => void, ms: number) => unknown;
  clear: (handle: unknown) => void;
}

const realTimers: Timers = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
  timers: Timers = realTimers,
): (...args: A) => void {
  let handle: unknown = null;
  return (...args: A) => {
    if (handle !== null) {
      timers.clear(handle);
    }
    handle = timers.set(() => {
      handle = null;
      fn(...args);
    }, delayMs);
  };
}
