/** Connectivity banner: shown with a retry button when the service is down. */

export function renderStatusBanner(
  container: HTMLElement,
  message: string | null,
  onRetry: () => void,
): void {
  container.replaceChildren();
  if (!message) return;
  const banner = document.createElement("div");
  banner.className = "status-banner";
  const text = document.createElement("span");
  text.textContent = message;
  const retry = document.createElement("button");
  retry.className = "retry-button";
  retry.textContent = "retry";
  retry.addEventListener("click", onRetry);
  banner.append(text, retry);
  container.appendChild(banner);
}
