import * as fs from "fs";

import { FrameEncoder } from "./encoder";
import { encodeFvec } from "./fvec";
import { decodeY4m, Video } from "./y4m";

export interface ExtractionJob {
  video: string;
  rate: number; // sampled frames per second
  out: string;
  encoder: FrameEncoder;
}

/**
 * Indices of the frames to embed: the first source frame of each
 * 1/rate-second window, i.e. the first frame whose timestamp is >= k/rate.
 */
export function sampleIndices(nFrames: number, sourceFps: number, rate: number): number[] {
  if (!(rate > 0)) {
    throw new Error(`sample rate must be positive, got ${rate}`);
  }
  const out: number[] = [];
  for (let k = 0; ; k++) {
    const idx = Math.ceil((k * sourceFps) / rate);
    if (idx >= nFrames) break;
    out.push(idx);
  }
  return out;
}

export async function embedVideo(video: Video, rate: number, encoder: FrameEncoder) {
  const indices = sampleIndices(video.frames.length, video.fps, rate);
  const rows: Float32Array[] = [];
  for (const idx of indices) {
    rows.push(await encoder.encode(video.frames[idx]));
  }
  return rows;
}

export async function extract(job: ExtractionJob): Promise<number> {
  if (!fs.existsSync(job.video)) {
    throw new Error(`video file not found: ${job.video}`);
  }
  const video = decodeY4m(fs.readFileSync(job.video));
  const rows = await embedVideo(video, job.rate, job.encoder);
  fs.writeFileSync(job.out, encodeFvec(rows, job.rate));
  return rows.length;
}
