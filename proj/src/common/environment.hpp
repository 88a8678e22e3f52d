// Copyright 2026 the lakeq authors
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

#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "common/error.hpp"
#include "common/value.hpp"

namespace lakeq {

// Named relations visible to a query, in insertion order. Relations are
// shared immutably; copying an Environment is cheap.
class Environment {
 public:
  void put(std::string name, std::shared_ptr<const Relation> rel) {
    if (by_name_.count(name)) {
      fail(ErrorKind::kInternal, "relation '" + name + "' already defined");
    }
    order_.push_back(name);
    by_name_.emplace(std::move(name), std::move(rel));
  }
  void put(std::string name, Relation rel) {
    put(std::move(name), std::make_shared<const Relation>(std::move(rel)));
  }

  const Relation* find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : it->second.get();
  }
  std::shared_ptr<const Relation> share(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : it->second;
  }
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  const std::vector<std::string>& names() const { return order_; }
  std::size_t size() const { return order_.size(); }

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::shared_ptr<const Relation>> by_name_;
};

}  // namespace lakeq
