/** Hash-based routes: queue (default), person page, split result. */

export type Route =
  | { view: "queue" }
  | { view: "person"; id: number }
  | { view: "split"; keptId: number; newId: number };

export function parseRoute(hash: string): Route {
  const path = hash.replace(/^#/, "");
  let match = /^\/person\/(\d+)$/.exec(path);
  if (match !== null) {
    return { view: "person", id: Number(match[1]) };
  }
  match = /^\/split\/(\d+)\/(\d+)$/.exec(path);
  if (match !== null) {
    return { view: "split", keptId: Number(match[1]), newId: Number(match[2]) };
  }
  return { view: "queue" };
}

export function personHash(personId: number): string {
  return `#/person/${personId}`;
}

export function splitHash(keptId: number, newId: number): string {
  return `#/split/${keptId}/${newId}`;
}

export function routeKey(route: Route): string {
  switch (route.view) {
    case "queue":
      return "queue";
    case "person":
      return `person/${route.id}`;
    case "split":
      return `split/${route.keptId}/${route.newId}`;
  }
}
