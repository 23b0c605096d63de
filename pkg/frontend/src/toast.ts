/** Non-blocking error toast; state is never touched on failure. */

export class Toast {
  private readonly el: HTMLDivElement;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(host: Element) {
    this.el = document.createElement("div");
    this.el.className = "toast hidden";
    host.appendChild(this.el);
  }

  show(message: string, ms = 4000): void {
    this.el.textContent = message;
    this.el.className = "toast";
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.el.className = "toast hidden";
      this.timer = null;
    }, ms);
  }
}
