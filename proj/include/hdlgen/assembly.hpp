// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdlgen {

/// One labelled body placed in an assembled module.
struct ModuleSection {
    std::string label;
    std::string code;
};

/// The first code region of `reply` that is a balanced module containing
/// every entry of `bodies` (whitespace-insensitive), if any.
std::optional<std::string> accept_module_reply(std::string_view reply, const std::vector<std::string> &bodies);

/// Deterministic module built without the backend: the header (outputs driven
/// procedurally become `output reg`), inferred internal declarations, each
/// section verbatim under a `// label` comment, then `endmodule`.
/// Throws FormatError (stage `stage`) when the header does not parse or a section is empty.
std::string assemble_module(
    std::string_view module_header,
    const std::vector<ModuleSection> &sections,
    const std::vector<std::string> &state_names,
    const std::string &stage);

} // namespace hdlgen
