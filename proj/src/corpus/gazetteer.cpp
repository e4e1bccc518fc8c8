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
#include <string_view>

#include "anonbench/corpus.hpp"

namespace anonbench::corpus::gazetteer {

namespace {

using namespace std::string_view_literals;

// Entries avoid common English words, month names and substrings of the
// generator templates so that detection and recall checks stay exact.
constexpr std::array kFirstNames = {
    "Abigail"sv,   "Adrian"sv,    "Alejandro"sv, "Amelia"sv,     "Anton"sv,
    "Beatrix"sv,   "Benedikt"sv,  "Camila"sv,    "Cedric"sv,     "Dmitri"sv,
    "Eleanor"sv,   "Emeka"sv,     "Esperanza"sv, "Fatima"sv,     "Florian"sv,
    "Giovanni"sv,  "Harriet"sv,   "Hiroshi"sv,   "Ingrid"sv,     "Isidore"sv,
    "Jasper"sv,    "Jocelyn"sv,   "Kenji"sv,     "Lakshmi"sv,    "Leopold"sv,
    "Lucinda"sv,   "Magnus"sv,    "Marisol"sv,   "Nadia"sv,      "Nikolai"sv,
    "Octavia"sv,   "Oluwaseun"sv, "Priya"sv,     "Quentin"sv,    "Rafael"sv,
    "Rosalind"sv,  "Santiago"sv,  "Svetlana"sv,  "Tobias"sv,     "Ulrich"sv,
    "Valentina"sv, "Wilhelmina"sv, "Xavier"sv,   "Yasmin"sv,     "Yusuf"sv,
    "Zachary"sv,   "Zofia"sv,     "Thaddeus"sv,  "Imogen"sv,     "Bartholomew"sv,
};

constexpr std::array kSurnames = {
    "Abernathy"sv,  "Achterberg"sv,   "Balogun"sv,    "Castellanos"sv,
    "Delacroix"sv,  "Eriksson"sv,     "Fairweather"sv, "Fitzgerald"sv,
    "Gallagher"sv,  "Hargreaves"sv,   "Ibarra"sv,     "Jankowski"sv,
    "Kowalczyk"sv,  "Lindqvist"sv,    "Montgomery"sv, "Nakamura"sv,
    "Okonkwo"sv,    "Papadopoulos"sv, "Quintero"sv,   "Rasmussen"sv,
    "Schellenberg"sv, "Takahashi"sv,  "Umarov"sv,     "Vasquez"sv,
    "Whitfield"sv,  "Xiong"sv,        "Yamamoto"sv,   "Zielinski"sv,
    "Ashworth"sv,   "Blackwood"sv,    "Chakraborty"sv, "Dimitriou"sv,
    "Esposito"sv,   "Fernandes"sv,    "Grunewald"sv,  "Haddad"sv,
    "Iwasaki"sv,    "Jovanovic"sv,    "Kavanagh"sv,   "Lombardi"sv,
    "Mwangi"sv,     "Novak"sv,        "Petrovic"sv,   "Rahman"sv,
    "Sokolov"sv,    "Wainwright"sv,   "Yilmaz"sv,     "Zimmerman"sv,
    "Kristiansen"sv, "Underhill"sv,
};

constexpr std::array kCities = {
    "Amsterdam"sv,     "Barcelona"sv,  "Buenos Aires"sv, "Cairo"sv,
    "Copenhagen"sv,    "Dublin"sv,     "Edinburgh"sv,    "Frankfurt"sv,
    "Helsinki"sv,      "Istanbul"sv,   "Johannesburg"sv, "Kyoto"sv,
    "Lisbon"sv,        "Marseille"sv,  "Montréal"sv, "Nairobi"sv,
    "New Delhi"sv,     "Oslo"sv,       "Prague"sv,       "Reykjavík"sv,
    "San Francisco"sv, "São Paulo"sv, "Seoul"sv,    "Singapore"sv,
    "Stockholm"sv,     "Toronto"sv,    "Valparaíso"sv, "Vienna"sv,
    "Warsaw"sv,        "Zürich"sv,
};

constexpr std::array kEmailDomains = {
    "mailbox.net"sv, "postbox.org"sv, "inboxly.com"sv, "letterhub.io"sv,
    "courier-mail.com"sv,
};

constexpr std::array kUrlSites = {
    "records-portal"sv, "patientdesk"sv, "citizenfiles"sv, "memberzone"sv,
    "casetracker"sv,
};

}  // namespace

std::span<const std::string_view> first_names() { return kFirstNames; }
std::span<const std::string_view> surnames() { return kSurnames; }
std::span<const std::string_view> cities() { return kCities; }
std::span<const std::string_view> email_domains() { return kEmailDomains; }
std::span<const std::string_view> url_sites() { return kUrlSites; }

}  // namespace anonbench::corpus::gazetteer
