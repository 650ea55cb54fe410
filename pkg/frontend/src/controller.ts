/**
 * Orchestrates the model against the API. DOM-free so the whole triage loop
 * can be driven headlessly; app.ts binds it to real events.
 */

import { TriageApi, type Summary } from './api.js';
import { actionForKey } from './keyboard.js';
import { TriageModel } from './model.js';

export interface ControllerEvents {
  rendered?: () => void;
  submitted?: (siteId: string, categories: string[]) => void;
  error?: (message: string) => void;
}

export class TriageController {
  readonly model = new TriageModel();
  summary: Summary | null = null;
  labeler = 'expert';

  constructor(
    private readonly api: TriageApi,
    private readonly events: ControllerEvents = {},
  ) {}

  /** Initial load and reload: the server is the only source of truth. */
  async refresh(): Promise<void> {
    const [categories, sites, summary] = await Promise.all([
      this.api.categories(),
      this.api.sites(),
      this.api.summary(),
    ]);
    this.model.applyServerState(categories, sites);
    this.summary = summary;
    this.events.rendered?.();
  }

  async handleKey(key: string): Promise<void> {
    const action = actionForKey(key);
    if (!action) {
      return;
    }
    switch (action.kind) {
      case 'toggle-side':
        this.model.toggleSide();
        break;
      case 'toggle-mask':
        this.model.toggleMask();
        break;
      case 'toggle-category':
        this.model.toggleCategoryByDigit(action.digit);
        break;
      case 'next':
        this.model.move(1);
        break;
      case 'prev':
        this.model.move(-1);
        break;
      case 'submit':
        await this.submit();
        return; // submit triggers its own render via refresh
    }
    this.events.rendered?.();
  }

  async submit(): Promise<boolean> {
    const card = this.model.current();
    if (!card) {
      return false;
    }
    if (this.model.selected.size === 0) {
      this.events.error?.('pick at least one category before submitting');
      return false;
    }
    const categories = [...this.model.selected].sort();
    try {
      await this.api.submitLabels(card.siteId, {
        categories,
        notes: this.model.notes,
        labeler: this.labeler,
      });
    } catch (err) {
      this.events.error?.(err instanceof Error ? err.message : String(err));
      return false;
    }
    this.events.submitted?.(card.siteId, categories);
    await this.refresh();
    this.model.advance();
    this.events.rendered?.();
    return true;
  }
}
