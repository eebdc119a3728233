/** Job polling: 1 s base interval, multiplicative backoff while the
 * state is unchanged, reset on every transition, stop on terminal
 * states. Concurrent watchers of the same job share one loop. */

import type { Job } from "./types.js";

export interface PollerOptions {
  intervalMs?: number;
  backoffFactor?: number;
  maxIntervalMs?: number;
}

type Listener = (job: Job) => void;

interface ActivePoll {
  listeners: Set<Listener>;
  timer: ReturnType<typeof setTimeout> | null;
  lastState: string | null;
  interval: number;
  stopped: boolean;
}

const TERMINAL = new Set(["done", "failed"]);

export class JobPoller {
  private readonly active = new Map<string, ActivePoll>();
  private readonly base: number;
  private readonly factor: number;
  private readonly max: number;

  constructor(
    private readonly fetchJob: (jobId: string) => Promise<Job>,
    options: PollerOptions = {},
  ) {
    this.base = options.intervalMs ?? 1000;
    this.factor = options.backoffFactor ?? 1.5;
    this.max = options.maxIntervalMs ?? 8000;
  }

  /** Returns an unsubscribe function. A second watch on the same job id
   * attaches to the existing loop instead of starting another. */
  watch(jobId: string, listener: Listener): () => void {
    let poll = this.active.get(jobId);
    if (poll) {
      poll.listeners.add(listener);
    } else {
      poll = {
        listeners: new Set([listener]),
        timer: null,
        lastState: null,
        interval: this.base,
        stopped: false,
      };
      this.active.set(jobId, poll);
      void this.tick(jobId, poll);
    }
    return () => {
      poll!.listeners.delete(listener);
      if (poll!.listeners.size === 0) {
        this.stop(jobId);
      }
    };
  }

  activeCount(): number {
    return this.active.size;
  }

  private stop(jobId: string): void {
    const poll = this.active.get(jobId);
    if (poll) {
      poll.stopped = true;
      if (poll.timer !== null) {
        clearTimeout(poll.timer);
      }
      this.active.delete(jobId);
    }
  }

  private async tick(jobId: string, poll: ActivePoll): Promise<void> {
    if (poll.stopped) {
      return;
    }
    let job: Job | null = null;
    try {
      job = await this.fetchJob(jobId);
    } catch {
      // transient fetch failure: back off and retry
      poll.interval = Math.min(poll.interval * this.factor, this.max);
    }
    if (poll.stopped) {
      return;
    }
    if (job) {
      for (const listener of poll.listeners) {
        listener(job);
      }
      if (TERMINAL.has(job.state)) {
        this.stop(jobId);
        return;
      }
      if (job.state === poll.lastState) {
        poll.interval = Math.min(poll.interval * this.factor, this.max);
      } else {
        poll.interval = this.base;
        poll.lastState = job.state;
      }
    }
    poll.timer = setTimeout(() => void this.tick(jobId, poll), poll.interval);
  }
}
