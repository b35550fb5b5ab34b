/**
 * Gym-style environment bound to one native env session.
 *
 * A BoundEnv owns exactly one session on the service: all game truth lives
 * natively, nothing is cached binding-side beyond the session id and the
 * space descriptors. Operations after close() are rejected.
 */

import { ServiceClient, decodeFrame } from "./client.js";
import type {
  ActionSpace,
  EnvOptions,
  Observation,
  ObservationSpace,
  StateView,
  StepInfo,
  StepResult,
} from "./types.js";

interface CreateEnvResponse {
  env_id: string;
  observation_space: { shape: number[]; dtype: string };
  action_space: { n: number; actions: string[] };
}

interface ResetResponse {
  state_view: StateView;
  frame_b64: string | null;
}

interface StepResponse {
  action: number;
  reward: number;
  done: boolean;
  info: StepInfo;
  state_view: StateView;
  frame_b64: string | null;
}

export class BoundEnv {
  readonly observationSpace: ObservationSpace;
  readonly actionSpace: ActionSpace;

  private closed = false;
  private episodeDone = false;

  private constructor(
    private readonly client: ServiceClient,
    private readonly envId: string,
    created: CreateEnvResponse,
  ) {
    this.observationSpace = {
      shape: created.observation_space.shape as [number, number, number],
      dtype: "uint8",
    };
    this.actionSpace = {
      n: created.action_space.n,
      actions: created.action_space.actions,
    };
  }

  /** Create a session on the service and bind it. */
  static async create(options: EnvOptions): Promise<BoundEnv> {
    const client = new ServiceClient(options.server);
    const created = await client.post<CreateEnvResponse>("/envs", {
      config: options.config ?? null,
      state_document: options.stateDocument ?? null,
      frame_skip: options.frameSkip ?? 4,
      truncate_rewards: options.truncateRewards ?? true,
      episode_policy: options.episodePolicy ?? "standard",
      seed: options.seed ?? null,
      render: options.render ?? false,
    });
    return new BoundEnv(client, created.env_id, created);
  }

  get done(): boolean {
    return this.episodeDone;
  }

  async reset(): Promise<Observation> {
    this.assertOpen();
    const body = await this.client.post<ResetResponse>(`/envs/${this.envId}/reset`);
    this.episodeDone = false;
    return this.toObservation(body.state_view, body.frame_b64);
  }

  /** Apply one discrete action (0=Noop, 1=Fire, 2=Left, 3=Right). */
  async step(action: number): Promise<StepResult> {
    this.assertOpen();
    if (!Number.isInteger(action) || action < 0 || action >= this.actionSpace.n) {
      throw new RangeError(`action index ${action} out of range 0..${this.actionSpace.n - 1}`);
    }
    const body = await this.client.post<StepResponse>(`/envs/${this.envId}/step`, { action });
    this.episodeDone = body.done;
    return [this.toObservation(body.state_view, body.frame_b64), body.reward, body.done, body.info];
  }

  /** Export the current state as canonical document text. */
  async exportState(): Promise<string> {
    this.assertOpen();
    const body = await this.client.get<{ document: string }>(`/envs/${this.envId}/state`);
    return body.document;
  }

  async close(): Promise<void> {
    if (this.closed) {
      return;
    }
    this.closed = true;
    await this.client.delete(`/envs/${this.envId}`);
  }

  private toObservation(view: StateView, frameB64: string | null): Observation {
    const observation: Observation = { stateView: view };
    if (frameB64) {
      observation.frame = decodeFrame(frameB64);
    }
    return observation;
  }

  private assertOpen(): void {
    if (this.closed) {
      throw new Error("env is closed");
    }
  }
}
