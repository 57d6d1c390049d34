// Copyright 2026 The dectk Authors
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

namespace dectk {

// Root of every error the toolkit throws on bad data or bad requests.
// The CLI maps these to exit status 65.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DECTK_DEFINE_ERROR(Name, Base) \
  class Name : public Base {           \
   public:                             \
    using Base::Base;                  \
  }

// Container layer.
DECTK_DEFINE_ERROR(FormatError, Error);
DECTK_DEFINE_ERROR(SchemaError, Error);

// Hiding channels.
DECTK_DEFINE_ERROR(PlanError, Error);
DECTK_DEFINE_ERROR(CapacityError, Error);
DECTK_DEFINE_ERROR(PayloadError, Error);
DECTK_DEFINE_ERROR(NoPayloadError, PayloadError);
DECTK_DEFINE_ERROR(CorruptPayloadError, PayloadError);

// Numerics and codec.
DECTK_DEFINE_ERROR(RangeError, Error);
DECTK_DEFINE_ERROR(EncodeError, Error);
DECTK_DEFINE_ERROR(DecodeError, Error);
DECTK_DEFINE_ERROR(ProfileError, Error);
DECTK_DEFINE_ERROR(ShapeError, Error);
DECTK_DEFINE_ERROR(DivisionError, Error);

#undef DECTK_DEFINE_ERROR

}  // namespace dectk
