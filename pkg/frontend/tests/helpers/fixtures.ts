/** Builders for wire-shaped fixtures used across the test suites. */

import { PersonPage, QueueItem } from "../../src/schemas";

export function makeQueueItem(
  candidateId: number,
  overrides: {
    surface?: string;
    isr?: string;
    language?: string;
    script?: string;
    combined?: number;
    mode?: "standard" | "arabic";
    sameCluster?: boolean;
    target?: QueueItem["target"];
    docTitle?: string | null;
    triggers?: Record<string, number>;
  } = {},
): QueueItem {
  const surface = overrides.surface ?? `Candidate ${candidateId}`;
  const combined = overrides.combined ?? 0.87;
  return {
    candidate_id: candidateId,
    new_surface: surface,
    new_isr: overrides.isr ?? surface.toLowerCase(),
    language: overrides.language ?? "en",
    script: overrides.script ?? "latin",
    target:
      overrides.target !== undefined
        ? overrides.target
        : {
            person_id: 100 + candidateId,
            canonical: `Person ${candidateId}`,
            isr: `person ${candidateId}`,
            variants: [`Person ${candidateId}`],
          },
    score: {
      bigram: Math.max(0, combined - 0.03),
      trigram: Math.max(0, combined - 0.08),
      consonant_bigram: Math.min(1, combined + 0.05),
      combined,
      mode: overrides.mode ?? "standard",
    },
    same_cluster: overrides.sameCluster ?? false,
    pending_count: 1,
    context: {
      doc_ids: [`doc-${candidateId}`],
      doc_title: overrides.docTitle !== undefined ? overrides.docTitle : `Story ${candidateId}`,
      triggers: overrides.triggers ?? { "prime minister": 1 },
    },
  };
}

export function makePersonPage(
  personId: number,
  variants: Array<{ surface: string; script?: string; language?: string; count?: number }>,
  options: {
    canonical?: string;
    triggers?: Record<string, number>;
    related?: Array<{ person_id: number; canonical: string; count: number }>;
  } = {},
): PersonPage {
  return {
    person: {
      id: personId,
      canonical: options.canonical ?? variants[0]!.surface,
      variants: variants.map((v) => ({
        surface: v.surface,
        language: v.language ?? "en",
        script: v.script ?? "latin",
        isr: v.surface.toLowerCase(),
        count: v.count ?? 1,
        first_seen: "2005-02-14",
        last_seen: "2005-02-14",
      })),
      trigger_phrases: options.triggers ?? {},
      cooccurrences: Object.fromEntries(
        (options.related ?? []).map((r) => [String(r.person_id), r.count]),
      ),
    },
    related: options.related ?? [],
  };
}
