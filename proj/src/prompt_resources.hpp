// Copyright 2026 The Post-Edit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <string_view>

namespace pe::detail {

// Generated at configure time from resources/prompts/<version>/<mode>.<role>.txt.
struct PromptResource {
  std::string_view version;
  std::string_view name;
  std::string_view text;
};

std::span<const PromptResource> prompt_resources();

}  // namespace pe::detail
