use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::agents::Pose;
use crate::error::{Error, Result};
use crate::sim::{Frame, RunLog, ScenarioKind};
use crate::Real;

use super::config::serialize_config;
use super::metrics::{aggregation_series, arrival_histogram};

/// Diameter (cm) of the robot markers burned into frames.
pub const MARKER_DIAMETER: Real = 4.0;

pub fn poses_csv(log: &RunLog) -> String {
    let mut s = String::from("tick,time_s,robot_id,x_cm,y_cm,heading_rad\n");
    for p in &log.poses {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            p.tick, p.time, p.robot_id, p.pose.x, p.pose.y, p.pose.heading
        );
    }
    s
}

pub fn events_csv(log: &RunLog) -> String {
    let mut s = String::from("time_s,robot_id,event_type,detail\n");
    for e in &log.events {
        let _ = writeln!(s, "{},{},{},{}", e.time, e.robot_id, e.kind, e.detail);
    }
    s
}

pub fn aggregation_csv(log: &RunLog) -> Result<String> {
    let mut s = String::from("time_s,S_cm\n");
    for (t, v) in aggregation_series(log)? {
        let _ = writeln!(s, "{t},{v}");
    }
    Ok(s)
}

pub fn histogram_csv(log: &RunLog) -> Result<String> {
    let h = arrival_histogram(std::slice::from_ref(log))?;
    let mut s = String::from("endpoint,count\n");
    for (id, n) in &h.counts {
        let _ = writeln!(s, "{id},{n}");
    }
    let _ = writeln!(s, "timeout,{}", h.timeouts);
    Ok(s)
}

fn paint_disc(rgb: &mut [u8], frame: &Frame, pose: &Pose<Real>, diameter: Real) {
    let cs = frame.cell_size;
    let r = diameter / 2.0;
    let lo = |c: Real| ((c - r) / cs).floor().max(0.0) as usize;
    let (x0, y0) = (lo(pose.x), lo(pose.y));
    let x1 = (((pose.x + r) / cs).ceil().max(0.0) as usize).min(frame.width);
    let y1 = (((pose.y + r) / cs).ceil().max(0.0) as usize).min(frame.height);
    for y in y0..y1 {
        for x in x0..x1 {
            let cx = (x as Real + 0.5) * cs;
            let cy = (y as Real + 0.5) * cs;
            if (cx - pose.x).hypot(cy - pose.y) <= r {
                let i = 3 * (y * frame.width + x);
                rgb[i..i + 3].copy_from_slice(&[255, 255, 255]);
            }
        }
    }
}

fn ppm(width: usize, height: usize, rgb: &[u8]) -> Vec<u8> {
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(rgb);
    out
}

/// Binary PPM of a frame with every robot drawn as a white disc.
pub fn render_frame(frame: &Frame) -> Vec<u8> {
    let mut rgb = frame.rgb.clone();
    for (_, pose) in &frame.poses {
        paint_disc(&mut rgb, frame, pose, MARKER_DIAMETER);
    }
    ppm(frame.width, frame.height, &rgb)
}

/// Binary PPM of a frame with every logged position drawn as a white dot.
pub fn render_trajectories(frame: &Frame, log: &RunLog) -> Vec<u8> {
    let mut rgb = frame.rgb.clone();
    let cs = frame.cell_size;
    for p in &log.poses {
        let x = (p.pose.x / cs).floor();
        let y = (p.pose.y / cs).floor();
        if x >= 0.0 && y >= 0.0 && (x as usize) < frame.width && (y as usize) < frame.height {
            let i = 3 * (y as usize * frame.width + x as usize);
            rgb[i..i + 3].copy_from_slice(&[255, 255, 255]);
        }
    }
    for (_, pose) in &frame.poses {
        paint_disc(&mut rgb, frame, pose, MARKER_DIAMETER);
    }
    ppm(frame.width, frame.height, &rgb)
}

pub fn frame_file_name(tick: u64) -> String {
    format!("frame_{tick:06}.ppm")
}

fn write(path: PathBuf, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(())
}

/// Writes the run's artifacts into `dir` and returns the written paths.
///
/// Always `poses.csv` and `events.csv`; `config.txt` when the run came from
/// a configuration; `aggregation.csv` or `histogram.csv` by scenario; one
/// `frame_NNNNNN.ppm` per kept frame and `trajectories.ppm` over the final
/// composite.
pub fn export_outputs(log: &RunLog, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    write(
        dir.join("poses.csv"),
        poses_csv(log).as_bytes(),
        &mut written,
    )?;
    write(
        dir.join("events.csv"),
        events_csv(log).as_bytes(),
        &mut written,
    )?;
    if let Some(c) = &log.config {
        write(
            dir.join("config.txt"),
            serialize_config(c).as_bytes(),
            &mut written,
        )?;
        match c.scenario {
            ScenarioKind::Case1 => write(
                dir.join("histogram.csv"),
                histogram_csv(log)?.as_bytes(),
                &mut written,
            )?,
            ScenarioKind::Case2 => write(
                dir.join("aggregation.csv"),
                aggregation_csv(log)?.as_bytes(),
                &mut written,
            )?,
        }
    }
    for f in &log.frames {
        write(
            dir.join(frame_file_name(f.tick)),
            &render_frame(f),
            &mut written,
        )?;
    }
    if let Some(f) = &log.final_frame {
        write(
            dir.join("trajectories.ppm"),
            &render_trajectories(f, log),
            &mut written,
        )?;
    }
    Ok(written)
}
