#!/usr/bin/env node
// Writes a synthetic multi-scene Y4M video for end-to-end testing.
// Usage: make_test_video <out.y4m> [--scenes 3] [--seconds 10] [--fps 10]

import * as fs from "fs";
import { parseArgs } from "util";

import { sceneVideo } from "./synthetic";
import { encodeY4m } from "./y4m";

const { values, positionals } = parseArgs({
  args: process.argv.slice(2),
  allowPositionals: true,
  options: {
    scenes: { type: "string", default: "3" },
    seconds: { type: "string", default: "10" },
    fps: { type: "string", default: "10" },
  },
});

if (positionals.length !== 1) {
  process.stderr.write("usage: make_test_video <out.y4m> [--scenes N] [--seconds S] [--fps F]\n");
  process.exit(2);
}

const out = positionals[0];
fs.writeFileSync(
  out,
  encodeY4m(sceneVideo(Number(values.scenes), Number(values.seconds), Number(values.fps)))
);
process.stderr.write(`wrote ${out}\n`);
