#pragma once

// Sources of algebraic expressions for a query problem. The gold provider
// echoes the dataset equation; the remote provider asks an external
// expression generator over HTTP:
//
//   POST <endpoint>  {"text": "...", "numbers": [5, 6]}
//   200              {"equation": "x = N0 + N1"}
//   non-2xx          {"error": "..."}

#include <string>
#include <vector>

#include "mwpr/record.hpp"

namespace mwpr {

struct ExpressionRequest {
  std::string text;
  std::vector<double> text_numbers;
};

struct ExpressionResponse {
  std::string equation;
  std::string provider_name;
  double latency_ms = 0.0;
};

ExpressionResponse provide_gold(const MWPRecord& record);

struct RemoteEndpoint {
  std::string url;  // e.g. "http://127.0.0.1:9000/generate"
  int timeout_ms = 2000;
};

ExpressionResponse provide_remote(const ExpressionRequest& request,
                                  const RemoteEndpoint& endpoint);

}  // namespace mwpr
