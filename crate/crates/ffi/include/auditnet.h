#ifndef AUDITNET_H
#define AUDITNET_H

/* Generated by cbindgen from the auditnet-ffi crate; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ANET_OK 0

#define ANET_INTERNAL 1

#define ANET_USAGE 2

#define ANET_PARSE 3

#define ANET_CAPACITY 4

#define ANET_ATTACK_SEPARATOR 0

#define ANET_ATTACK_DIRECTED 1

#define ANET_ATTACK_G_REMAINDER 2

#define ANET_ATTACK_APPROX 3

#define ANET_ATTACK_CLIQUE_APPEND 4

/**
 * Attack plan together with the graph it targets. For the clique-append
 * strategy the target is the extended graph, not the input.
 */
typedef struct AnetAttack AnetAttack;

/**
 * Parsed audit network, undirected or directed.
 */
typedef struct AnetGraph AnetGraph;

/**
 * Corruption scenario: graph, corrupt set, claims and budget.
 */
typedef struct AnetScenario AnetScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on the calling thread, or null
 * after a success. The pointer stays valid until the next call into this
 * library from the same thread.
 */
const char *anet_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from a function documented to return a caller-freed
 * string, and must not be freed twice. Null is ignored.
 */
void anet_string_free(char *s);

/**
 * Parses graph text (`u`/`d` header plus edge lines) into a new handle.
 *
 * # Safety
 * `text` must be NUL-terminated; `out` must point to writable pointer
 * storage. On success `*out` owns the handle until [`anet_graph_free`].
 */
int anet_graph_parse(const char *text, AnetGraph **out);

/**
 * # Safety
 * `graph` must come from [`anet_graph_parse`] or [`anet_attack_graph`]
 * and must not be freed twice. Null is ignored.
 */
void anet_graph_free(AnetGraph *graph);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
size_t anet_graph_node_count(const AnetGraph *graph);

/**
 * Number of edges or arcs, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
size_t anet_graph_edge_count(const AnetGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle or null (which reads as undirected).
 */
bool anet_graph_is_directed(const AnetGraph *graph);

/**
 * Graph text for the handle. The caller frees the returned string with
 * [`anet_string_free`]; null for a null handle.
 *
 * # Safety
 * `graph` must be a live handle or null.
 */
char *anet_graph_to_text(const AnetGraph *graph);

/**
 * Smallest corruption budget that blinds any search for `goal` truthful
 * nodes, written to `out_m`. `cap` 0 uses the default limit for the
 * graph kind; directed graphs support `goal` 1 only.
 *
 * # Safety
 * `graph` must be a live handle; `out_m` must point to writable storage.
 */
int anet_critical_budget(const AnetGraph *graph, size_t goal, size_t cap, size_t *out_m);

/**
 * Best separator-plus-component objective over all component bounds.
 * With `goal > 1`, up to `goal - 1` nodes may sit outside the bound
 * (undirected only). Each out pointer may be null to skip that field.
 * `cap` 0 uses the default solver limit.
 *
 * # Safety
 * `graph` must be a live handle; non-null out pointers must be writable.
 */
int anet_min_sum(const AnetGraph *graph,
                 size_t goal,
                 size_t cap,
                 size_t *out_objective,
                 size_t *out_k,
                 size_t *out_separator);

/**
 * Parses scenario JSON (graph text, corrupt ids, claims, budget) into a
 * new handle.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must point to writable pointer
 * storage. On success `*out` owns the handle until
 * [`anet_scenario_free`].
 */
int anet_scenario_parse(const char *json, AnetScenario **out);

/**
 * # Safety
 * `scenario` must come from [`anet_scenario_parse`] or
 * [`anet_attack_scenario`] and must not be freed twice. Null is ignored.
 */
void anet_scenario_free(AnetScenario *scenario);

/**
 * Scenario JSON for the handle. The caller frees the returned string
 * with [`anet_string_free`]; null for a null handle.
 *
 * # Safety
 * `scenario` must be a live handle or null.
 */
char *anet_scenario_to_json(const AnetScenario *scenario);

/**
 * Corruption budget the scenario certifies against, or 0 for null.
 *
 * # Safety
 * `scenario` must be a live handle or null.
 */
size_t anet_scenario_budget(const AnetScenario *scenario);

/**
 * Number of corrupt nodes in the scenario, or 0 for null.
 *
 * # Safety
 * `scenario` must be a live handle or null.
 */
size_t anet_scenario_corrupt_count(const AnetScenario *scenario);

/**
 * Runs the detector matching the scenario's graph kind and writes the
 * declared truthful nodes. `goal` 0 or 1 recovers one node; larger goals
 * use the many-node detector (undirected only). At most `ids_cap` ids go
 * to `out_ids` (null to only count); `out_len` gets the full count,
 * `out_rounds` the removal rounds, `out_certified` whether the
 * declaration is certified against the scenario budget. Out pointers may
 * be null to skip fields.
 *
 * # Safety
 * `scenario` must be a live handle; `out_ids`, when non-null, must point
 * to at least `ids_cap` writable u32 slots; other non-null out pointers
 * must be writable.
 */
int anet_detect(const AnetScenario *scenario,
                size_t goal,
                uint32_t *out_ids,
                size_t ids_cap,
                size_t *out_len,
                size_t *out_rounds,
                bool *out_certified);

/**
 * Builds a corruption plan against the graph. `kind` is one of the
 * `ANET_ATTACK_*` constants; `goal` matters for `ANET_ATTACK_G_REMAINDER`
 * (0 reads as 1), `delta_num`/`delta_den` give the clique-append density
 * in `[1/2, 1)` (0/0 reads as 1/2), `effort` and `seed` steer the approx
 * strategy.
 *
 * # Safety
 * `graph` must be a live handle; `out` must point to writable pointer
 * storage. On success `*out` owns the handle until [`anet_attack_free`].
 */
int anet_attack(const AnetGraph *graph,
                int kind,
                size_t goal,
                uint64_t delta_num,
                uint64_t delta_den,
                size_t effort,
                uint64_t seed,
                AnetAttack **out);

/**
 * # Safety
 * `attack` must come from [`anet_attack`] and must not be freed twice.
 * Null is ignored.
 */
void anet_attack_free(AnetAttack *attack);

/**
 * Budget the plan is certified against, or 0 for null.
 *
 * # Safety
 * `attack` must be a live handle or null.
 */
size_t anet_attack_budget(const AnetAttack *attack);

/**
 * Number of nodes the plan actually corrupts, or 0 for null.
 *
 * # Safety
 * `attack` must be a live handle or null.
 */
size_t anet_attack_budget_used(const AnetAttack *attack);

/**
 * Size of the search the plan blinds, or 0 for null.
 *
 * # Safety
 * `attack` must be a live handle or null.
 */
size_t anet_attack_target_goal(const AnetAttack *attack);

/**
 * Whether the plan corrupts at least half the nodes.
 *
 * # Safety
 * `attack` must be a live handle or null (which reads as false).
 */
bool anet_attack_degenerate(const AnetAttack *attack);

/**
 * Writes the corrupt node ids: at most `ids_cap` to `out_ids` (null to
 * only count), the full count to `out_len`.
 *
 * # Safety
 * `attack` must be a live handle; `out_ids`, when non-null, must point
 * to at least `ids_cap` writable u32 slots; `out_len` may be null.
 */
int anet_attack_corrupt(const AnetAttack *attack,
                        uint32_t *out_ids,
                        size_t ids_cap,
                        size_t *out_len);

/**
 * Clones the graph the plan targets into a new handle. For clique-append
 * plans this is the extended graph.
 *
 * # Safety
 * `attack` must be a live handle; `out` must point to writable pointer
 * storage. On success `*out` owns the handle until [`anet_graph_free`].
 */
int anet_attack_graph(const AnetAttack *attack, AnetGraph **out);

/**
 * Realizes the plan into a scenario handle: corrupt set, claims and the
 * certification budget.
 *
 * # Safety
 * `attack` must be a live handle; `out` must point to writable pointer
 * storage. On success `*out` owns the handle until
 * [`anet_scenario_free`].
 */
int anet_attack_scenario(const AnetAttack *attack, AnetScenario **out);

/**
 * Checks that the plan blinds every detector at its budget, writing the
 * verdict to `out_blinding`. Small graphs get the exhaustive
 * configuration check (`cap` 0 uses the default limit); larger ones the
 * structural one.
 *
 * # Safety
 * `attack` must be a live handle; `out_blinding` must point to writable
 * storage.
 */
int anet_attack_certified(const AnetAttack *attack, size_t cap, bool *out_blinding);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* AUDITNET_H */
