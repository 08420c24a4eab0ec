/******************************************************************************
 * Copyright 2026 The hscsim Authors. All Rights Reserved.
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
 *****************************************************************************/

#pragma once

#include "hscsim/adaptive.hpp"
#include "hscsim/commands.hpp"
#include "hscsim/config.hpp"
#include "hscsim/energy_audit.hpp"
#include "hscsim/impedance.hpp"
#include "hscsim/io.hpp"
#include "hscsim/ode.hpp"
#include "hscsim/scenario.hpp"
#include "hscsim/simulation.hpp"
#include "hscsim/steering.hpp"
#include "hscsim/vehicle.hpp"
