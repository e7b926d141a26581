/**
 * Runtime schemas for every JSON payload the review UI consumes.
 *
 * Each response passes through its schema before any view touches it, so a
 * server that renames, drops, or retypes a consumed field fails loudly here
 * instead of rendering garbage.  Unknown extra fields are tolerated: additive
 * server changes must not break deployed clients.
 */

import { z } from "zod";

export const scoreBreakdownSchema = z.object({
  bigram: z.number(),
  trigram: z.number(),
  consonant_bigram: z.number(),
  combined: z.number(),
  mode: z.enum(["standard", "arabic"]),
});

export const queueTargetSchema = z.object({
  person_id: z.number().int(),
  canonical: z.string(),
  isr: z.string(),
  variants: z.array(z.string()),
});

export const queueContextSchema = z.object({
  doc_ids: z.array(z.string()),
  doc_title: z.string().nullable(),
  triggers: z.record(z.number()),
});

export const queueItemSchema = z.object({
  candidate_id: z.number().int(),
  new_surface: z.string(),
  new_isr: z.string(),
  language: z.string(),
  script: z.string(),
  target: queueTargetSchema.nullable(),
  score: scoreBreakdownSchema,
  same_cluster: z.boolean(),
  pending_count: z.number().int(),
  context: queueContextSchema,
});

export const queueSchema = z.array(queueItemSchema);

export const decisionReceiptSchema = z.object({
  candidate_id: z.number().int(),
  disposition: z.enum(["confirmed", "denied"]),
  person_id: z.number().int(),
});

export const personVariantSchema = z.object({
  surface: z.string(),
  language: z.string(),
  script: z.string(),
  isr: z.string(),
  count: z.number().int(),
  first_seen: z.string(),
  last_seen: z.string(),
});

export const personRecordSchema = z.object({
  id: z.number().int(),
  canonical: z.string(),
  variants: z.array(personVariantSchema),
  trigger_phrases: z.record(z.number()),
  cooccurrences: z.record(z.number()),
});

export const relatedPersonSchema = z.object({
  person_id: z.number().int(),
  canonical: z.string(),
  count: z.number().int(),
});

export const personPageSchema = z.object({
  person: personRecordSchema,
  related: z.array(relatedPersonSchema),
});

export const splitResultSchema = z.object({
  person_id: z.number().int(),
  new_person_id: z.number().int(),
});

// Error bodies carry a string detail; framework-level validation errors
// carry a list of issue objects instead, so both forms must parse.
export const errorBodySchema = z.object({
  detail: z.union([z.string(), z.array(z.unknown())]),
});

export type ScoreBreakdown = z.infer<typeof scoreBreakdownSchema>;
export type QueueTarget = z.infer<typeof queueTargetSchema>;
export type QueueContext = z.infer<typeof queueContextSchema>;
export type QueueItem = z.infer<typeof queueItemSchema>;
export type DecisionReceipt = z.infer<typeof decisionReceiptSchema>;
export type PersonVariant = z.infer<typeof personVariantSchema>;
export type PersonRecord = z.infer<typeof personRecordSchema>;
export type RelatedPerson = z.infer<typeof relatedPersonSchema>;
export type PersonPage = z.infer<typeof personPageSchema>;
export type SplitResult = z.infer<typeof splitResultSchema>;

/** Raised when a response fails its schema: the wire contract drifted. */
export class SchemaDriftError extends Error {
  constructor(label: string, issues: string) {
    super(`response for ${label} does not match the expected schema: ${issues}`);
    this.name = "SchemaDriftError";
  }
}

export function parseWire<T>(schema: z.ZodType<T>, data: unknown, label: string): T {
  const result = schema.safeParse(data);
  if (!result.success) {
    const issues = result.error.issues
      .map((issue) => `${issue.path.join(".") || "<root>"}: ${issue.message}`)
      .join("; ");
    throw new SchemaDriftError(label, issues);
  }
  return result.data;
}
