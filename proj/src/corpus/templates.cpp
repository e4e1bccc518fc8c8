// Copyright 2026 The anonbench Authors.
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

#include <array>

#include "anonbench/synth.hpp"

namespace anonbench::corpus {

namespace {

using namespace std::string_view_literals;

constexpr std::array kPersonTemplates = {
    "Please forward the report to {}."sv,
    "{} signed the lease yesterday."sv,
    "The nurse spoke with {} about the results."sv,
    "Our records show that {} requested a refund."sv,
};
constexpr std::array kLocationTemplates = {
    "The shipment left {} on schedule."sv,
    "The family relocated to {} last spring."sv,
    "The conference will be held in {}."sv,
};
constexpr std::array kEmailTemplates = {
    "You can reach the applicant at {}."sv,
    "Send the invoice to {} before the deadline."sv,
    "A confirmation was emailed to {}."sv,
};
constexpr std::array kPhoneTemplates = {
    "Call the front desk at {} for details."sv,
    "The emergency contact number is {}."sv,
};
constexpr std::array kDateTemplates = {
    "The appointment is scheduled for {}."sv,
    "The contract was signed on {}."sv,
};
constexpr std::array kIdTemplates = {
    "The account number on file is {}."sv,
    "Please quote reference {} in all replies."sv,
};
constexpr std::array kUrlTemplates = {
    "The full profile is available at {}."sv,
    "Documents were uploaded to {} for review."sv,
};

}  // namespace

std::span<const std::string_view> sentence_templates(Category category) {
  switch (category) {
    case Category::kPerson: return kPersonTemplates;
    case Category::kLocation: return kLocationTemplates;
    case Category::kEmail: return kEmailTemplates;
    case Category::kPhone: return kPhoneTemplates;
    case Category::kDate: return kDateTemplates;
    case Category::kId: return kIdTemplates;
    case Category::kUrl: return kUrlTemplates;
    case Category::kOrg: break;
  }
  return {};
}

}  // namespace anonbench::corpus
