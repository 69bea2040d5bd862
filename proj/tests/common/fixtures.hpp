#pragma once

#include <string>

#include "latent_order/core.hpp"
#include "latent_order/json_io.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(LATENT_ORDER_TEST_DATA) + "/" + name;
}

// "the opinion of the boy": opine-01 -ARG1-> thing, opine-01 -ARG0-> boy.
inline latent_order::Instance fig2_instance() {
  return latent_order::parse_instance(latent_order::read_text(data_path("fig2_instance.json")));
}

// Token 1 starts opine-01 -> thing, token 4 starts boy; the rest emit the
// terminal directly.
inline latent_order::GenerationOrder fig2_order() {
  latent_order::GenerationOrder o = latent_order::make_order(5, 3, true);
  o.matrix(0, 3) = 1;
  o.matrix(1, 0) = 1;
  o.matrix(2, 3) = 1;
  o.matrix(3, 3) = 1;
  o.matrix(4, 2) = 1;
  o.matrix(5 + 0, 1) = 1;
  o.matrix(5 + 1, 3) = 1;
  o.matrix(5 + 2, 3) = 1;
  return o;
}

}  // namespace fixtures
