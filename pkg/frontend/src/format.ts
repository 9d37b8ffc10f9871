/** Display formatting. Values come from the service; only rounding happens here. */

export function formatShare(value: number): string {
  return value.toFixed(2);
}

export function formatMoney(value: number): string {
  return `${value.toFixed(2)} M€`;
}

export function formatSignedMoney(value: number): string {
  const sign = value > 0 ? "+" : "";
  return `${sign}${value.toFixed(3)} M€/yr`;
}

export function formatRelative(value: number | null): string {
  if (value === null) {
    return "n/a";
  }
  const percent = value * 100;
  const sign = percent > 0 ? "+" : "";
  return `${sign}${percent.toFixed(1)}%`;
}
