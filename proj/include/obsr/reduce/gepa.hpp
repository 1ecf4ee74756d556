#pragma once

#include <string_view>

#include "obsr/dom/document.hpp"

namespace obsr::reduce {

enum class GepaProgram { Seed, WorkArenaR02, WebLinxR02 };

// "seed", "workarena_r02", "weblinx_r02". Throws ConfigError.
GepaProgram parse_gepa_program(std::string_view id);
std::string_view to_string(GepaProgram program) noexcept;

// Ports of the evolved pruning programs. `action_history` is the history as
// one string (see join_history()).
dom::DomDocument run_gepa_program(const dom::DomDocument& doc, std::string_view goal,
                                  std::string_view action_history, GepaProgram program);

}  // namespace obsr::reduce
