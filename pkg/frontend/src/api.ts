/**
 * Typed client for the triage JSON API served by the pipeline CLI.
 */

export interface SiteImages {
  vanilla: string;
  modified: string;
  mask: string;
}

export interface SiteDto {
  site_id: string;
  status: 'UNREVIEWED' | 'LABELED';
  categories: string[];
  has_mask: boolean;
  images: SiteImages;
}

export interface Summary {
  counts: Record<string, number>;
  total_sites: number;
  labeled_sites: number;
  broken_sites: number;
}

export interface LabelSubmission {
  categories: string[];
  notes: string;
  labeler: string;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(`API error ${status}: ${JSON.stringify(detail)}`);
  }
}

export class TriageApi {
  constructor(private readonly base: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      throw new ApiError(response.status, body?.detail ?? body);
    }
    return body as T;
  }

  categories(): Promise<string[]> {
    return this.request<string[]>('/api/categories');
  }

  sites(): Promise<SiteDto[]> {
    return this.request<SiteDto[]>('/api/sites');
  }

  summary(): Promise<Summary> {
    return this.request<Summary>('/api/summary');
  }

  submitLabels(siteId: string, submission: LabelSubmission): Promise<void> {
    return this.request(`/api/sites/${encodeURIComponent(siteId)}/labels`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(submission),
    });
  }
}
