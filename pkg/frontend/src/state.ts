/** Session state: one profile, one selection, one clustering at a time.
 *
 * Invariants enforced here rather than in the views:
 *   - at most one in-flight profile request; responses for a superseded
 *     dc/index are discarded (latest wins);
 *   - slider movement is debounced into a single fetch;
 *   - a clustering is kept only while its dc matches the profile's dc, so
 *     the cluster view can never show labels for a stale cutoff.
 */

import { ApiClient, ClusterPayload, ProfilePayload } from "./api.js";

export type Listener = () => void;

export interface StateOptions {
  debounceMs?: number;
  onError?: (message: string) => void;
}

export class SessionState {
  dc: number;
  index: string;
  profile: ProfilePayload | null = null;
  clustering: ClusterPayload | null = null;
  readonly selected = new Set<number>();

  private readonly api: ApiClient;
  private readonly debounceMs: number;
  private readonly onError: (message: string) => void;
  private readonly listeners: Listener[] = [];
  private requestSeq = 0;
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;
  profileFetches = 0; // instrumentation for the debounce contract

  constructor(api: ApiClient, dc: number, index = "rtree", opts: StateOptions = {}) {
    this.api = api;
    this.dc = dc;
    this.index = index;
    this.debounceMs = opts.debounceMs ?? 200;
    this.onError = opts.onError ?? (() => undefined);
  }

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  /** Immediate profile fetch; stale responses are dropped. */
  async fetchProfile(dc: number, index = this.index): Promise<void> {
    this.dc = dc;
    this.index = index;
    const token = ++this.requestSeq;
    this.profileFetches += 1;
    try {
      const prof = await this.api.profile(dc, index);
      if (token !== this.requestSeq) return; // superseded while in flight
      this.profile = prof;
      if (this.clustering && this.clustering.dc !== prof.dc) {
        this.clustering = null; // never show clusters for a different dc
      }
      this.emit();
    } catch (err) {
      if (token !== this.requestSeq) return;
      this.onError(err instanceof Error ? err.message : String(err));
    }
  }

  /** Debounced slider path: many calls within the window collapse into
   * exactly one request for the last value. */
  scheduleProfile(dc: number, index = this.index): void {
    this.dc = dc;
    this.index = index;
    if (this.debounceTimer !== null) clearTimeout(this.debounceTimer);
    this.debounceTimer = setTimeout(() => {
      this.debounceTimer = null;
      void this.fetchProfile(this.dc, this.index);
    }, this.debounceMs);
  }

  toggleSelected(id: number): void {
    if (this.selected.has(id)) this.selected.delete(id);
    else this.selected.add(id);
    this.emit();
  }

  setSelected(ids: Iterable<number>): void {
    this.selected.clear();
    for (const id of ids) this.selected.add(id);
    this.emit();
  }

  /** Cluster with the manual selection. */
  async clusterFromSelection(): Promise<ClusterPayload | null> {
    const centers = [...this.selected].sort((a, b) => a - b);
    return this.requestCluster({ centers });
  }

  /** Cluster with the automatic top-k rule. */
  async clusterTopK(k: number): Promise<ClusterPayload | null> {
    return this.requestCluster({ topk: k });
  }

  private async requestCluster(
    req: { centers?: number[]; topk?: number },
  ): Promise<ClusterPayload | null> {
    if (!this.profile) {
      this.onError("request a profile before clustering");
      return null;
    }
    const dc = this.profile.dc;
    try {
      const body = await this.api.cluster({ dc, index: this.profile.index, ...req });
      if (!this.profile || this.profile.dc !== body.dc) return null; // stale
      this.clustering = body;
      this.setSelected(body.centers); // centers echoed = centers highlighted
      return body;
    } catch (err) {
      this.onError(err instanceof Error ? err.message : String(err));
      return null;
    }
  }
}
