/** Client-side validation of trace lines for inline error display.
 *
 * Mirrors the service's line syntax: comma-separated activities with
 * double-quote quoting, an optional space-separated "×k" frequency
 * suffix, blank lines and #-comments skipped, marker tokens reserved.
 * The server stays authoritative; this only powers per-line feedback
 * before submission.
 */

export interface ParsedLine {
  kind: "trace";
  names: string[];
  line: number;
  raw: string;
}

export interface LineError {
  kind: "error";
  message: string;
  line: number;
  raw: string;
}

export type LineResult = ParsedLine | LineError;

const RESERVED = new Set(["|>", "[]"]);
const FREQ_SUFFIX = /(?:^|\s)×(\d+)$/;

function splitFields(body: string): string[] | null {
  const fields: string[] = [];
  let current = "";
  let quoted = false;
  let i = 0;
  while (i < body.length) {
    const ch = body[i];
    if (quoted) {
      if (ch === '"') {
        if (body[i + 1] === '"') {
          current += '"';
          i += 2;
          continue;
        }
        quoted = false;
        i += 1;
        continue;
      }
      current += ch;
      i += 1;
    } else if (ch === '"') {
      quoted = true;
      i += 1;
    } else if (ch === ",") {
      fields.push(current);
      current = "";
      i += 1;
    } else {
      current += ch;
      i += 1;
    }
  }
  if (quoted) {
    return null;
  }
  fields.push(current);
  return fields;
}

export function parseLine(raw: string, line: number): LineResult | null {
  let text = raw.trim();
  if (!text || text.startsWith("#")) {
    return null;
  }
  if (!text.endsWith('"')) {
    const match = FREQ_SUFFIX.exec(text);
    if (match) {
      if (parseInt(match[1], 10) <= 0) {
        return { kind: "error", message: "frequency suffix must be positive", line, raw };
      }
      text = text.slice(0, match.index).trim();
    }
  }
  if (!text) {
    return { kind: "trace", names: [], line, raw };
  }
  const fields = splitFields(text);
  if (fields === null) {
    return { kind: "error", message: "unterminated quote", line, raw };
  }
  for (const field of fields) {
    if (field === "") {
      return { kind: "error", message: "empty activity token", line, raw };
    }
    if (RESERVED.has(field)) {
      return { kind: "error", message: `"${field}" is reserved for the trace markers`, line, raw };
    }
  }
  return { kind: "trace", names: fields, line, raw };
}

/** Every non-blank, non-comment line of the text, parsed or in error. */
export function parseDocument(text: string): LineResult[] {
  const results: LineResult[] = [];
  text.split(/\r?\n/).forEach((raw, i) => {
    const parsed = parseLine(raw, i + 1);
    if (parsed !== null) {
      results.push(parsed);
    }
  });
  return results;
}
