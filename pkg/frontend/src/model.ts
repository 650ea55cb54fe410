/**
 * Pure view-model for the triage queue.
 *
 * Holds no truth of its own: every card is rebuilt from the server payload,
 * so reloading the page (or calling applyServerState again) reconstructs
 * exactly what the server knows.
 */

import type { SiteDto } from './api.js';

export type Status = 'UNREVIEWED' | 'LABELED';

export interface SiteCard {
  siteId: string;
  status: Status;
  categories: string[];
  hasMask: boolean;
  images: { vanilla: string; modified: string; mask: string };
}

export interface QueueFilter {
  status?: Status;
  category?: string;
}

export type ImageSide = 'vanilla' | 'modified';

export class TriageModel {
  categories: string[] = [];
  sites: SiteCard[] = [];
  filter: QueueFilter = { status: 'UNREVIEWED' };
  cursor = 0;

  /** per-card editing state */
  side: ImageSide = 'vanilla';
  maskOn = false;
  selected = new Set<string>();
  notes = '';

  applyServerState(categories: string[], sites: SiteDto[]): void {
    this.categories = [...categories];
    this.sites = sites.map((s) => ({
      siteId: s.site_id,
      status: s.status,
      categories: [...s.categories],
      hasMask: s.has_mask,
      images: { ...s.images },
    }));
    if (this.cursor >= this.queue().length) {
      this.cursor = Math.max(0, this.queue().length - 1);
    }
  }

  queue(): SiteCard[] {
    return this.sites.filter((card) => {
      if (this.filter.status && card.status !== this.filter.status) {
        return false;
      }
      if (this.filter.category && !card.categories.includes(this.filter.category)) {
        return false;
      }
      return true;
    });
  }

  current(): SiteCard | null {
    return this.queue()[this.cursor] ?? null;
  }

  setFilter(filter: QueueFilter): void {
    this.filter = filter;
    this.cursor = 0;
    this.resetCardState();
  }

  resetCardState(): void {
    this.side = 'vanilla';
    this.maskOn = false;
    this.selected = new Set();
    this.notes = '';
  }

  toggleSide(): ImageSide {
    this.side = this.side === 'vanilla' ? 'modified' : 'vanilla';
    return this.side;
  }

  /** no-op when the current site has no mask: the control is disabled */
  toggleMask(): boolean {
    const card = this.current();
    if (!card || !card.hasMask) {
      this.maskOn = false;
      return false;
    }
    this.maskOn = !this.maskOn;
    return this.maskOn;
  }

  /** digit keys 1..9 map onto the category list in API order */
  toggleCategoryByDigit(digit: number): string | null {
    const category = this.categories[digit - 1];
    if (!category) {
      return null;
    }
    if (this.selected.has(category)) {
      this.selected.delete(category);
    } else {
      this.selected.add(category);
    }
    return category;
  }

  canSubmit(): boolean {
    return this.current() !== null && this.selected.size > 0;
  }

  /** advance to the next site in the queue after a submit or skip */
  advance(): void {
    const len = this.queue().length;
    if (len === 0) {
      this.cursor = 0;
    } else if (this.cursor >= len) {
      this.cursor = len - 1;
    }
    this.resetCardState();
  }

  move(delta: number): void {
    const len = this.queue().length;
    if (len === 0) {
      return;
    }
    this.cursor = Math.min(Math.max(this.cursor + delta, 0), len - 1);
    this.resetCardState();
  }

  /** counts derived from the cards on screen; must agree with /api/summary */
  visibleCounts(): Record<string, number> {
    const counts: Record<string, number> = {};
    for (const category of this.categories) {
      counts[category] = 0;
    }
    for (const card of this.sites) {
      for (const category of card.categories) {
        counts[category] = (counts[category] ?? 0) + 1;
      }
    }
    return counts;
  }
}
