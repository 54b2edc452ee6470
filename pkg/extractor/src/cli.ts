#!/usr/bin/env node
import { parseArgs } from "util";

import { getEncoder } from "./encoder";
import { extract } from "./extract";

const USAGE =
  "usage: cli extract --video <path.y4m> --out <path.fvec> " +
  "[--rate 2] [--encoder pixel|clip]";

async function main() {
  const [command, ...rest] = process.argv.slice(2);
  if (command !== "extract") {
    process.stderr.write(`unknown command ${JSON.stringify(command)}\n${USAGE}\n`);
    process.exit(2);
  }
  let values;
  try {
    ({ values } = parseArgs({
      args: rest,
      options: {
        video: { type: "string" },
        out: { type: "string" },
        rate: { type: "string", default: "2" },
        encoder: { type: "string", default: "pixel" },
        help: { type: "boolean", default: false },
      },
    }));
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n${USAGE}\n`);
    process.exit(2);
    return;
  }
  if (values.help) {
    process.stdout.write(`${USAGE}\n`);
    return;
  }
  if (!values.video || !values.out) {
    process.stderr.write(`--video and --out are required\n${USAGE}\n`);
    process.exit(2);
  }
  const rate = Number(values.rate);
  if (!(rate > 0)) {
    process.stderr.write(`--rate must be a positive number, got ${values.rate}\n`);
    process.exit(2);
  }
  try {
    const n = await extract({
      video: values.video as string,
      rate,
      out: values.out as string,
      encoder: getEncoder(values.encoder as string),
    });
    process.stderr.write(`wrote ${n} feature rows to ${values.out}\n`);
  } catch (err) {
    process.stderr.write(`${(err as Error).message}\n`);
    process.exit(1);
  }
}

main();
