#pragma once

#include <string>

#include "rpu/io.hpp"

#ifndef RPU_GAMES_DIR
#error "RPU_GAMES_DIR must point at the bundled games"
#endif

namespace rpu::testing {

inline Game bundled(const std::string& name) { return io::load_game(std::string(RPU_GAMES_DIR) + "/" + name + ".game"); }

inline Game bundled(const std::string& name, LossKind kind) { return bundled(name).with_loss(LossSpec::of(kind)); }

}  // namespace rpu::testing
