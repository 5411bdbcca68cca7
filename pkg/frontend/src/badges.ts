// Validation badges are a pure projection of the service report onto
// node ids — the client never re-derives or filters rules.

import type { Finding, ValidationReport } from "./types";

export type BadgeMap = Map<string, Finding[]>;

export function badgesFromReport(report: ValidationReport): BadgeMap {
  const badges: BadgeMap = new Map();
  for (const finding of report.findings) {
    for (const nodeId of finding.node_ids) {
      const existing = badges.get(nodeId);
      if (existing) {
        existing.push(finding);
      } else {
        badges.set(nodeId, [finding]);
      }
    }
  }
  return badges;
}

export function worstSeverity(findings: Finding[]): "Error" | "Warning" {
  return findings.some((finding) => finding.severity === "Error") ? "Error" : "Warning";
}

export function badgeLabel(findings: Finding[]): string {
  const rules = [...new Set(findings.map((finding) => finding.rule_id))];
  return rules.join(",");
}
