// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"
#include "hdlgen/prompts.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hdlgen {

/// Splits text on line-leading "N." / "N)" markers.
///
/// Text before the first marker is dropped. Lines between two markers belong
/// to the earlier item, as do more-indented numbered lines (sub-lists fold
/// into their parent). After the last item only indented lines continue it;
/// the first unindented prose line ends the list.
std::vector<std::string> parse_numbered_list(std::string_view text);

/// Asks for the input/output relationship list of `task`. The prompt is
/// chosen by circuit kind (General uses the sequential wording).
/// Throws FormatError when the reply has no numbered items.
InformationList extract_info_list(
    const Task &task, CircuitKind kind, const LlmSession &session, int iteration = 1);

} // namespace hdlgen
