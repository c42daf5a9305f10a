#pragma once

#include <nlohmann/json.hpp>

#include "pyrsts/diff_family.hpp"
#include "pyrsts/diff_matrix.hpp"

namespace pyrsts {

struct TripleSystem;  // pyramidal.hpp

using ordered_json = nlohmann::ordered_json;

/// DF file schema:
///   { "group": [n1,...],
///     "spread": [[[r,...],...], ...],   // members as full element lists
///     "base_blocks": [[[r,...],[r,...],[r,...]], ...] }
/// Blocks and spread members are sorted lexicographically; trivial members
/// are omitted (zero is always an implicit hole).
ordered_json df_to_json(const DifferenceFamily& df);
DifferenceFamily df_from_json(const ordered_json& j);

/// STS file schema:
///   { "v":, "f":, "group": [n1,...], "blocks": [["F0","G(1,0)",...],...] }
/// Points are "F<i>" for fixed points and "G(r,...)" for group points;
/// blocks sorted canonically.
ordered_json sts_to_json(const TripleSystem& sys);
TripleSystem sts_from_json(const ordered_json& j);

ordered_json dm_to_json(const DifferenceMatrix& m);
DifferenceMatrix dm_from_json(const ordered_json& j);

/// Serializes with a trailing newline; byte-identical across runs.
std::string dump_json(const ordered_json& j);

}  // namespace pyrsts
