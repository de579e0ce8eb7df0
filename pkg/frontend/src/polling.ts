import type { JobRecord } from "./types.js";

/** Anything that can report a job record by id; `ApiClient` satisfies this. */
export interface JobSource {
  job(jobId: string): Promise<JobRecord>;
}

/** A polled job finished in the `failed` state; the record carries the detail. */
export class JobFailedError extends Error {
  constructor(readonly record: JobRecord) {
    super(record.error ?? "job failed");
    this.name = "JobFailedError";
  }
}

export interface PollOptions {
  /** Delay after the first poll (default 1000 ms). */
  initialDelayMs?: number;
  /** Added to the delay after every poll (default 1000 ms). */
  stepMs?: number;
  /** Delay ceiling (default 5000 ms). */
  maxDelayMs?: number;
  /** Safety cap on poll count (default 600). */
  maxPolls?: number;
  sleep?: (ms: number) => Promise<void>;
  onUpdate?: (record: JobRecord) => void;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Poll a job until it terminates. The wait starts at one second and backs
 * off by one second per poll up to five seconds. Resolves with the `done`
 * record; rejects with {@link JobFailedError} when the job fails.
 */
export async function pollJob(source: JobSource, jobId: string, options: PollOptions = {}): Promise<JobRecord> {
  const initial = options.initialDelayMs ?? 1000;
  const step = options.stepMs ?? 1000;
  const max = options.maxDelayMs ?? 5000;
  const maxPolls = options.maxPolls ?? 600;
  const sleep = options.sleep ?? defaultSleep;

  let delay = initial;
  for (let attempt = 0; attempt < maxPolls; attempt += 1) {
    const record = await source.job(jobId);
    options.onUpdate?.(record);
    if (record.state === "done") {
      return record;
    }
    if (record.state === "failed") {
      throw new JobFailedError(record);
    }
    await sleep(delay);
    delay = Math.min(delay + step, max);
  }
  throw new Error(`job ${jobId} did not finish after ${maxPolls} polls`);
}
