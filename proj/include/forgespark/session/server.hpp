// Copyright 2026 The ForgeSpark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGESPARK_SESSION_SERVER_HPP_
#define FORGESPARK_SESSION_SERVER_HPP_

#include <filesystem>
#include <memory>
#include <string>

#include "forgespark/session/session.hpp"

namespace forgespark::session {

// Page served at `/` when no UI bundle is present.
extern const char* const kFallbackPage;

// JSON API under /api plus the static review UI bundle at `/`.
class HttpServer {
 public:
  // `ui_dir` holds index.html and assets; may be empty or missing.
  HttpServer(SessionService& service, std::filesystem::path ui_dir);
  ~HttpServer();

  // Binds 127.0.0.1:`port` (0 picks a free port). False when the port is taken.
  bool bind(int port);
  int port() const { return port_; }
  // Serves until stop(); call after a successful bind.
  void run();
  void stop();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace forgespark::session

#endif  // FORGESPARK_SESSION_SERVER_HPP_
