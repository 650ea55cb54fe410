/**
 * End-to-end triage loop against the real pipeline server.
 *
 * Spawns `astrack triage-serve` over a fixture output directory, then
 * drives the UI controller through its keyboard layer: three sites get
 * labeled (one multi-label TRACKING+BROKEN), the summary endpoint and the
 * persisted JSON-lines log must agree, and a fresh controller (the reload
 * case) must reconstruct the same state.
 */

import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, mkdirSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { TriageApi } from '../src/api.js';
import { TriageController } from '../src/controller.js';

const PNG = Buffer.from(
  'iVBORw0KGgoAAAANSUhEUgAAAAYAAAAECAAAAACIbxGfAAAAE0lEQVR4nGM8wcDAwMDA' +
  'xICFAgAVpADQZDfagAAAAABJRU5ErkJggg==',
  'base64',
);

const SITES = ['alpha', 'beta', 'gamma', 'delta'];
const PORT = 8470 + Math.floor(Math.random() * 400);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let outDir: string;

function seedFixtures(root: string): { out: string; shots: string } {
  const out = join(root, 'out');
  const shots = join(root, 'shots');
  mkdirSync(join(out, 'masks'), { recursive: true });
  for (const site of SITES) {
    const dir = join(shots, site);
    mkdirSync(dir, { recursive: true });
    writeFileSync(join(dir, 'vanilla_a_1.png'), PNG);
    writeFileSync(join(dir, 'modified_1.png'), PNG);
    writeFileSync(join(out, 'masks', `${site}.png`), PNG);
  }
  writeFileSync(join(out, 'suspicious.txt'), SITES.join('\n') + '\n');
  return { out, shots };
}

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const r = await fetch(`${BASE}/api/categories`);
      if (r.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error('triage server did not come up');
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
}

beforeAll(async () => {
  const root = mkdtempSync(join(tmpdir(), 'triage-loop-'));
  const seeded = seedFixtures(root);
  outDir = seeded.out;
  server = spawn('python3', [
    '-m', 'astrack.cli', 'triage-serve',
    '--out', seeded.out,
    '--screenshots', seeded.shots,
    '--port', String(PORT),
  ], { stdio: 'ignore' });
  await waitForServer();
}, 30_000);

afterAll(() => {
  server?.kill();
});

describe('triage loop against the live API', () => {
  it('labels three sites through the keyboard layer', async () => {
    const controller = new TriageController(new TriageApi(BASE));
    await controller.refresh();
    expect(controller.model.queue().map((c) => c.siteId)).toEqual(SITES);
    const categories = controller.model.categories;
    expect(categories).toHaveLength(9);
    const digit = (name: string) => String(categories.indexOf(name) + 1);

    // site 1: BROKEN
    await controller.handleKey(' '); // peek at the modified side first
    await controller.handleKey(digit('BROKEN'));
    await controller.handleKey('Enter');
    // site 2: the anti-adblock case, TRACKING and BROKEN together
    await controller.handleKey(digit('TRACKING'));
    await controller.handleKey(digit('BROKEN'));
    await controller.handleKey('Enter');
    // site 3: COOKIE
    await controller.handleKey(digit('COOKIE'));
    await controller.handleKey('Enter');

    expect(controller.model.queue().map((c) => c.siteId)).toEqual(['delta']);

    const summary = controller.summary!;
    expect(summary.labeled_sites).toBe(3);
    expect(summary.counts['BROKEN']).toBe(2);
    expect(summary.counts['TRACKING']).toBe(1);
    expect(summary.counts['COOKIE']).toBe(1);
    expect(summary.broken_sites).toBe(2);
  });

  it('summary agrees with the persisted JSON-lines log', async () => {
    const lines = readFileSync(join(outDir, 'triage_labels.jsonl'), 'utf-8')
      .trim().split('\n').map((line) => JSON.parse(line));
    expect(lines).toHaveLength(3);
    const bySite = new Map(lines.map((l) => [l.site_id, l.categories]));
    expect(bySite.get('alpha')).toEqual(['BROKEN']);
    expect(bySite.get('beta')).toEqual(['BROKEN', 'TRACKING']);
    expect(bySite.get('gamma')).toEqual(['COOKIE']);

    const counts: Record<string, number> = {};
    for (const line of lines) {
      for (const category of line.categories) {
        counts[category] = (counts[category] ?? 0) + 1;
      }
    }
    const summary = await new TriageApi(BASE).summary();
    for (const [category, n] of Object.entries(counts)) {
      expect(summary.counts[category]).toBe(n);
    }
  });

  it('empty submissions are blocked client-side', async () => {
    let error = '';
    const controller = new TriageController(new TriageApi(BASE), {
      error: (m) => { error = m; },
    });
    await controller.refresh();
    const before = controller.summary!.labeled_sites;
    const ok = await controller.submit();
    expect(ok).toBe(false);
    expect(error).toContain('category');
    await controller.refresh();
    expect(controller.summary!.labeled_sites).toBe(before);
  });

  it('a fresh controller reconstructs exactly the server state', async () => {
    const reloaded = new TriageController(new TriageApi(BASE));
    await reloaded.refresh();
    const byId = new Map(reloaded.model.sites.map((c) => [c.siteId, c]));
    expect(byId.get('alpha')?.status).toBe('LABELED');
    expect(byId.get('beta')?.categories).toEqual(['BROKEN', 'TRACKING']);
    expect(byId.get('delta')?.status).toBe('UNREVIEWED');
    // every visible count equals the corresponding summary value
    const counts = reloaded.model.visibleCounts();
    const summary = reloaded.summary!;
    for (const [category, n] of Object.entries(counts)) {
      expect(summary.counts[category] ?? 0).toBe(n);
    }
  });

  it('server-side validation errors surface through the controller', async () => {
    let error = '';
    const controller = new TriageController(new TriageApi(BASE), {
      error: (m) => { error = m; },
    });
    await controller.refresh();
    // force an invalid category past the client checks
    controller.model.selected.add('NOT_A_CATEGORY');
    const ok = await controller.submit();
    expect(ok).toBe(false);
    expect(error).toContain('400');
  });
});
