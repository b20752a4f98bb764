// API document shapes, mirroring the service's JSON schemas.

export type WheelName = "FL" | "FR" | "RL" | "RR";
export const WHEELS: WheelName[] = ["FL", "FR", "RL", "RR"];

export interface WheelDoc {
  drive_spin_rad_s: number;
  sweep_amplitude_rad: number;
  sweep_out_rate_rad_s: number;
  sweep_in_rate_rad_s: number;
  spin_during_sweep_out_rad_s: number;
  spin_during_sweep_in_rad_s: number;
  leg_extension_frac: number;
  phase_offset_frac: number;
}

export interface GaitDoc {
  schema_version: string;
  label: string;
  roll_posture_tracking: boolean;
  wheels: Record<WheelName, WheelDoc>;
}

export interface SpaceDim {
  name: string;
  lower: number;
  upper: number;
  kind: "continuous" | "sign";
}

export interface SpaceDoc {
  d: number;
  dims: SpaceDim[];
}

export interface PresetsResponse {
  schema_version: string;
  presets: Record<string, GaitDoc>;
  space: SpaceDoc;
}

export interface SimulateRequest {
  gait: string | GaitDoc;
  slope_deg: number;
  duration_s: number;
  dt_s: number;
  target_yaw_deg: number;
  seed: number;
  stop_at_target: boolean;
}

export interface EpisodeSummary {
  schema_version: string;
  outcome: string;
  final_yaw_rad: number;
  time_to_target_s: number | null;
  downhill_drift_m: number;
  n_samples: number;
  duration_recorded_s: number;
  gait_label: string;
  slope_angle_rad: number;
  target_yaw_rad: number;
  rng_seed: number;
}

export interface TrajectoryPoint {
  t_s: number;
  x_m: number;
  y_m: number;
  yaw_rad: number;
  roll_rad: number;
}

export interface SimulateResponse {
  schema_version: string;
  summary: EpisodeSummary;
  trajectory: TrajectoryPoint[];
}

export interface CampaignRecordDoc {
  iteration: number;
  kind: "seed" | "random" | "bo";
  x: number[];
  value: number | null;
  failed: boolean;
  best_so_far: number | null;
  hyperparams: Record<string, unknown> | null;
}

export interface CampaignStatus {
  schema_version: string;
  campaign_id: string;
  running: boolean;
  stop_requested: boolean;
  budget: number;
  iterations_completed: number;
  records: CampaignRecordDoc[];
  best_so_far: number | null;
  best_gait?: GaitDoc;
  error: string | null;
}

export interface CampaignStartRequest {
  budget: number;
  n_random: number;
  seed_gait: string | GaitDoc | null;
  slope_deg: number;
  duration_s: number;
  dt_s: number;
  rng_seed: number;
}
