// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "leafindex/types.hpp"

namespace leafindex {

// Complex arithmetic expression over named variables: numbers, i, pi,
// + - * / ^, parentheses and sin cos exp log sqrt abs conj re im.
class Expression {
 public:
  struct Node;

  static Expression parse(const std::string& text, const std::vector<std::string>& variables);

  // values[k] binds variables[k].
  cplx operator()(const cplx* values) const;
  cplx operator()(const std::vector<cplx>& values) const { return (*this)(values.data()); }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace leafindex
