import type { ReportPayload } from './types.js';

export const TAG_COLORS = ['Green', 'Yellow', 'Red'] as const;
export type TagColor = (typeof TAG_COLORS)[number];

export interface TagView {
  id: string;
  name: string;
  color: TagColor;
  sampledDs: number;
  expectedLoss: number;
}

export class PayloadError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'PayloadError';
  }
}

/**
 * Tag list view-model straight from the report payload, in report order.
 * Colors form a closed enum; anything else is a malformed payload.
 */
export function tagViews(report: ReportPayload): TagView[] {
  if (!Array.isArray(report.components)) {
    throw new PayloadError('report payload has no component list');
  }
  return report.components.map((component) => {
    if (!(TAG_COLORS as readonly string[]).includes(component.tag)) {
      throw new PayloadError(`unknown tag color ${JSON.stringify(component.tag)}`);
    }
    return {
      id: component.id,
      name: component.name,
      color: component.tag as TagColor,
      sampledDs: component.sampled_ds,
      expectedLoss: component.expected_loss,
    };
  });
}

const CSS_BY_COLOR: Record<TagColor, string> = {
  Green: 'tag-green',
  Yellow: 'tag-yellow',
  Red: 'tag-red',
};

/** Render one badge per component into the container (cleared first). */
export function renderTags(container: HTMLElement, views: TagView[]): void {
  container.replaceChildren();
  if (views.length === 0) {
    const empty = document.createElement('p');
    empty.className = 'empty-state';
    empty.textContent = 'No components in this room.';
    container.append(empty);
    return;
  }
  for (const view of views) {
    const row = document.createElement('div');
    row.className = 'tag-row';

    const badge = document.createElement('span');
    badge.className = `tag-badge ${CSS_BY_COLOR[view.color]}`;
    badge.dataset['color'] = view.color;
    badge.textContent = view.color;

    const label = document.createElement('span');
    label.className = 'tag-label';
    label.textContent = `${view.name} (DS${view.sampledDs})`;

    const loss = document.createElement('span');
    loss.className = 'tag-loss';
    loss.textContent = `$${view.expectedLoss.toFixed(0)}`;

    row.append(badge, label, loss);
    container.append(row);
  }
}
