import { describe, expect, it } from 'vitest';

import type { SiteDto } from '../src/api.js';
import { actionForKey } from '../src/keyboard.js';
import { TriageModel } from '../src/model.js';

const CATEGORIES = [
  'ANIMATION', 'BANNER', 'BROKEN', 'COOKIE', 'FONTS',
  'MEDIA', 'MINOR', 'TEXT', 'TRACKING',
];

function dto(id: string, status: 'UNREVIEWED' | 'LABELED', categories: string[] = [],
             hasMask = true): SiteDto {
  return {
    site_id: id,
    status,
    categories,
    has_mask: hasMask,
    images: {
      vanilla: `/api/sites/${id}/image/vanilla`,
      modified: `/api/sites/${id}/image/modified`,
      mask: `/api/sites/${id}/image/mask`,
    },
  };
}

function loaded(): TriageModel {
  const model = new TriageModel();
  model.applyServerState(CATEGORIES, [
    dto('alpha', 'UNREVIEWED'),
    dto('beta', 'LABELED', ['BROKEN']),
    dto('gamma', 'UNREVIEWED'),
    dto('delta', 'LABELED', ['BROKEN', 'TRACKING']),
  ]);
  return model;
}

describe('queue filtering', () => {
  it('defaults to the unreviewed queue', () => {
    const model = loaded();
    expect(model.queue().map((c) => c.siteId)).toEqual(['alpha', 'gamma']);
  });

  it('filters by category', () => {
    const model = loaded();
    model.setFilter({ category: 'BROKEN' });
    expect(model.queue().map((c) => c.siteId)).toEqual(['beta', 'delta']);
  });

  it('filters by labeled status', () => {
    const model = loaded();
    model.setFilter({ status: 'LABELED' });
    expect(model.queue().map((c) => c.siteId)).toEqual(['beta', 'delta']);
  });

  it('empty filter shows everything', () => {
    const model = loaded();
    model.setFilter({});
    expect(model.queue()).toHaveLength(4);
  });
});

describe('image toggling', () => {
  it('space toggling twice returns to the original side', () => {
    const model = loaded();
    expect(model.side).toBe('vanilla');
    model.toggleSide();
    expect(model.side).toBe('modified');
    model.toggleSide();
    expect(model.side).toBe('vanilla');
  });

  it('mask overlay flips on and off', () => {
    const model = loaded();
    expect(model.toggleMask()).toBe(true);
    expect(model.toggleMask()).toBe(false);
  });

  it('mask toggle is inert for a site without a mask', () => {
    const model = new TriageModel();
    model.applyServerState(CATEGORIES, [dto('bare', 'UNREVIEWED', [], false)]);
    expect(model.toggleMask()).toBe(false);
    expect(model.maskOn).toBe(false);
  });
});

describe('category selection', () => {
  it('digits map onto the category list in order', () => {
    const model = loaded();
    expect(model.toggleCategoryByDigit(3)).toBe('BROKEN');
    expect(model.toggleCategoryByDigit(9)).toBe('TRACKING');
    expect([...model.selected].sort()).toEqual(['BROKEN', 'TRACKING']);
    model.toggleCategoryByDigit(3);
    expect([...model.selected]).toEqual(['TRACKING']);
  });

  it('rejects empty submissions client-side', () => {
    const model = loaded();
    expect(model.canSubmit()).toBe(false);
    model.toggleCategoryByDigit(1);
    expect(model.canSubmit()).toBe(true);
  });

  it('digit without a category is ignored', () => {
    const model = new TriageModel();
    model.applyServerState(['BROKEN'], [dto('x', 'UNREVIEWED')]);
    expect(model.toggleCategoryByDigit(5)).toBeNull();
    expect(model.selected.size).toBe(0);
  });
});

describe('server state is the only truth', () => {
  it('re-applying the payload reconstructs status and counts', () => {
    const model = loaded();
    const counts = model.visibleCounts();
    expect(counts['BROKEN']).toBe(2);
    expect(counts['TRACKING']).toBe(1);
    model.applyServerState(CATEGORIES, [dto('alpha', 'LABELED', ['MINOR'])]);
    expect(model.sites).toHaveLength(1);
    expect(model.visibleCounts()['MINOR']).toBe(1);
  });

  it('cursor clamps when the queue shrinks', () => {
    const model = loaded();
    model.move(1);
    model.applyServerState(CATEGORIES, [dto('only', 'UNREVIEWED')]);
    expect(model.current()?.siteId).toBe('only');
  });
});

describe('keyboard map', () => {
  it('binds the documented keys', () => {
    expect(actionForKey(' ')).toEqual({ kind: 'toggle-side' });
    expect(actionForKey('m')).toEqual({ kind: 'toggle-mask' });
    expect(actionForKey('4')).toEqual({ kind: 'toggle-category', digit: 4 });
    expect(actionForKey('Enter')).toEqual({ kind: 'submit' });
    expect(actionForKey('ArrowRight')).toEqual({ kind: 'next' });
    expect(actionForKey('q')).toBeNull();
    expect(actionForKey('0')).toBeNull();
  });
});
