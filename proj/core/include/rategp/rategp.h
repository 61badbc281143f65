/*
 * Copyright 2026 The rategp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Umbrella header: pulls in the full public API.

#ifndef RATEGP_RATEGP_H_
#define RATEGP_RATEGP_H_

#include "rategp/baseline.h"
#include "rategp/errors.h"
#include "rategp/genotype.h"
#include "rategp/gp.h"
#include "rategp/io.h"
#include "rategp/kernel.h"
#include "rategp/projection.h"
#include "rategp/rate.h"
#include "rategp/simdata.h"
#include "rategp/threads.h"

#endif  // RATEGP_RATEGP_H_
