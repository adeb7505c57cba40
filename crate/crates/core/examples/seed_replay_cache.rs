//! Regenerate the shipped replay cache: five canned completions of the
//! few-shot unroute prompt, keyed by the assembled prompt text. Run after
//! any prompt change, then commit the cache directory.
//!
//! Usage: cargo run --example seed_replay_cache [target-dir]

use benchtop::llm::{assemble_prompt, bundle_for_task, ReplayCache, Shots};
use benchtop::sim::TaskKind;

const RESPONSES: [&str; 5] = [
    // 0: the classic control-flow failure
    "Strategy: keep lifting the cable in small steps until it is free of the tunnel.\n\n\
     ```\n\
     grasp_cable();\n\
     while (z_force <= -0.4) {\n\
     \x20\x20move_compliant(pose(1) * pose_rpy([0, 0, 0.005], [0, 0, 0]));\n\
     }\n\
     ```\n",
    // 1: a valid up / right-until-snag / left-until-free / up program
    "Strategy:\n\
     1. Move the cable up until a snag is detected; that is the cover of the channel.\n\
     2. Slide right while pressing up until another snag; that is a wall or the edge of the opening.\n\
     3. Slide left while pressing up until the downward force releases; that is the opening.\n\
     4. Lift the cable out through the opening.\n\n\
     Program:\n\n\
     ```\n\
     grasp_cable();\n\
     move_compliant(pose(1) * pose_rpy([0, 0, 0.01], [0, 0, 0]), until = any(z_force <= -0.4, translation_error <= 0.001));\n\
     move_compliant(pose(1) * pose_rpy([0.03, 0, 0.01], [0, 0, 0]), until = any(x_force <= -0.4, translation_error <= 0.001), tare = false);\n\
     move_compliant(pose(1) * pose_rpy([-0.03, 0, 0.01], [0, 0, 0]), until = any(z_force ~= 0.0, translation_error <= 0.001), tare = false);\n\
     move_compliant(pose(1) * pose_rpy([0, 0, 0.01], [0, 0, 0]), until = any(translation_error <= 0.001, z_force <= -0.4), tare = false);\n\
     ```\n",
    // 2: undefined variable access
    "We can reuse the up pose from the examples:\n\n\
     ```\n\
     grasp_cable();\n\
     move_compliant(up_pose, until = any(z_force <= -0.4, translation_error <= 0.001));\n\
     move_compliant(up_pose, until = translation_error <= 0.001);\n\
     ```\n",
    // 3: valid but pulls straight up with no search
    "The cable should come straight out if we pull gently:\n\n\
     ```\n\
     grasp_cable();\n\
     move_compliant(pose(1) * pose_rpy([0, 0, 0.02], [0, 0, 0]), until = translation_error <= 0.001);\n\
     ```\n",
    // 4: for-loop over waypoints
    "```\n\
     grasp_cable();\n\
     for offset in [0.01, 0.02, 0.03]:\n\
     \x20\x20move_compliant(pose(1) * pose_rpy([offset, 0, 0.01], [0, 0, 0]));\n\
     ```\n",
];

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| {
        format!("{}/assets/replay-cache", env!("CARGO_MANIFEST_DIR"))
    });
    let prompt = assemble_prompt(&bundle_for_task(TaskKind::CableUnroute, Shots::Few));
    let cache = ReplayCache::new(&dir);
    for (i, response) in RESPONSES.iter().enumerate() {
        cache
            .put(&benchtop::llm::CacheEntry {
                model: "gpt-4".to_string(),
                temperature: 0.0,
                sample_index: i as u32,
                prompt: prompt.clone(),
                response: response.to_string(),
            })
            .expect("cache write");
    }
    println!("wrote {} entries to {dir}", RESPONSES.len());
}
