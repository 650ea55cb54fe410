/**
 * Browser entry: binds the controller to the DOM.
 */

import { TriageApi } from './api.js';
import { TriageController } from './controller.js';
import type { SiteCard } from './model.js';

const api = new TriageApi('');
const statusLine = () => document.getElementById('status')!;

const controller = new TriageController(api, {
  rendered: render,
  submitted: (siteId, categories) => {
    statusLine().textContent = `saved ${siteId}: ${categories.join(', ')}`;
  },
  error: (message) => {
    statusLine().textContent = message;
    statusLine().classList.add('error');
    setTimeout(() => statusLine().classList.remove('error'), 1500);
  },
});

function imageUrl(card: SiteCard): string {
  const model = controller.model;
  return model.side === 'vanilla' ? card.images.vanilla : card.images.modified;
}

function render(): void {
  const model = controller.model;
  const card = model.current();
  const queue = model.queue();

  const counter = document.getElementById('counter')!;
  counter.textContent = queue.length
    ? `${model.cursor + 1} / ${queue.length}`
    : 'queue empty';

  const img = document.getElementById('shot') as HTMLImageElement;
  const mask = document.getElementById('mask') as HTMLImageElement;
  const siteName = document.getElementById('site-name')!;
  if (card) {
    siteName.textContent = `${card.siteId} (${model.side})`;
    img.src = imageUrl(card);
    img.hidden = false;
    mask.src = card.images.mask;
    mask.hidden = !model.maskOn;
  } else {
    siteName.textContent = 'nothing to review';
    img.hidden = true;
    mask.hidden = true;
  }

  const boxes = document.getElementById('categories')!;
  boxes.innerHTML = '';
  model.categories.forEach((category, i) => {
    const label = document.createElement('label');
    const input = document.createElement('input');
    input.type = 'checkbox';
    input.checked = model.selected.has(category);
    input.addEventListener('change', () => {
      void controller.handleKey(String(i + 1));
    });
    label.append(input, ` ${i + 1}. ${category}`);
    boxes.append(label);
  });

  const filters = document.getElementById('filters') as HTMLSelectElement;
  if (!filters.dataset.bound) {
    filters.dataset.bound = '1';
    filters.addEventListener('change', () => {
      const value = filters.value;
      if (value === 'UNREVIEWED' || value === 'LABELED') {
        controller.model.setFilter({ status: value });
      } else if (value === 'ALL') {
        controller.model.setFilter({});
      } else {
        controller.model.setFilter({ category: value });
      }
      render();
    });
  }
  const current = filters.value || 'UNREVIEWED';
  filters.innerHTML = '';
  for (const option of ['UNREVIEWED', 'LABELED', 'ALL', ...model.categories]) {
    const el = document.createElement('option');
    el.value = option;
    el.textContent = option;
    filters.append(el);
  }
  filters.value = current;

  const summary = document.getElementById('summary')!;
  if (controller.summary) {
    const parts = Object.entries(controller.summary.counts)
      .filter(([, n]) => n > 0)
      .map(([category, n]) => `${category}: ${n}`);
    summary.textContent =
      `${controller.summary.labeled_sites}/${controller.summary.total_sites} labeled` +
      (parts.length ? ` | ${parts.join('  ')}` : '') +
      ` | broken: ${controller.summary.broken_sites}`;
  }
}

document.addEventListener('keydown', (event) => {
  const target = event.target as HTMLElement | null;
  if (target && target.tagName === 'TEXTAREA') {
    return; // let notes typing through
  }
  if (event.key === ' ') {
    event.preventDefault();
  }
  void controller.handleKey(event.key);
});

const notes = document.getElementById('notes') as HTMLTextAreaElement;
notes.addEventListener('input', () => {
  controller.model.notes = notes.value;
});

document.getElementById('submit')!.addEventListener('click', () => {
  void controller.submit();
});

void controller.refresh();
