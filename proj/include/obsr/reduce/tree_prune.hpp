#pragma once

#include <span>
#include <string>

#include "obsr/dom/document.hpp"
#include "obsr/reduce/request.hpp"

namespace obsr::reduce {

// Keeps the selected elements, all their ancestors, descendants down to the
// configured depth (first N element children per node), and up to
// `max_sibling` element siblings on each side. `html` and `body` are always
// kept. Every other element is unwrapped: its element children move up to the
// nearest kept ancestor and its own text is dropped. Throws UnknownBid.
dom::DomDocument tree_prune(const dom::DomDocument& doc, std::span<const std::string> selected_bids,
                            const TreePruneConfig& config = TreePruneConfig::standard());

}  // namespace obsr::reduce
