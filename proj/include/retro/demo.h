// Copyright 2026 The Retrodictor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace retro {

class UnknownDemo : public std::invalid_argument {
  public:
    explicit UnknownDemo(const std::string &name);
};

/// "margenau", "three-box", "rotated".
std::vector<std::string> demo_names();

/// Constants, every formula's value, the oracle value and a short explanation.
std::string render_demo(const std::string &name);

}  // namespace retro
