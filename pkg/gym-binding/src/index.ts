export { BoundEnv } from "./env.js";
export { make, register, registeredIds } from "./registry.js";
export { ServiceClient, ServiceError, decodeFrame } from "./client.js";
export type {
  ActionSpace,
  EnvOptions,
  Observation,
  ObservationSpace,
  StateView,
  StepInfo,
  StepResult,
} from "./types.js";
