/*
 * Copyright 2026 The xai-bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serves any in-process Model over the wire protocol. Used for offline
// end-to-end runs of the remote client and as a protocol reference.

#ifndef XAIBENCH_WIRE_SERVER_H_
#define XAIBENCH_WIRE_SERVER_H_

#include <memory>
#include <string>
#include <thread>

#include "xaibench/model.h"

namespace httplib {
class Server;
}

namespace xaibench {

class WireServer {
 public:
  // max_batch_size overrides the model's advertised limit when positive.
  explicit WireServer(ModelHandle model, int max_batch_size = 0);
  ~WireServer();

  WireServer(const WireServer&) = delete;
  WireServer& operator=(const WireServer&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop(); blocks the caller.
  void serve();
  // Serves on a background thread.
  void start();
  void stop();

 private:
  ModelHandle model_;
  ModelInfo info_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace xaibench

#endif  // XAIBENCH_WIRE_SERVER_H_
