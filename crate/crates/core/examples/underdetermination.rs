//! Every machine that explains a finite trace has a non-equivalent twin.

use blackbox::inference::{
    build_provisional_table, divergent_extension, enumerate_consistent_machines,
};
use blackbox::Trace;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trace = Trace::parse(1, "0,1,0,1")?;
    for s_max in [2, 3, 4] {
        let en = enumerate_consistent_machines(&trace, s_max)?;
        println!("s_max={s_max}: {} hypotheses {:?}", en.len(), en.keys());
    }

    let en = enumerate_consistent_machines(&trace, 3)?;
    for h in &en.hypotheses {
        let twin = divergent_extension(h, trace.len());
        println!("{h}");
        println!("  replays   {}", h.replay(6));
        println!("  twin      {twin}");
        println!("  replays   {}", twin.replay(6));
    }

    let table = build_provisional_table(&Trace::parse(1, "0,0,1,0,0,1,0")?, 2)?;
    println!(
        "provisional table over window 2: {} states, conflict={}, total={}",
        table.size(),
        table.conflict,
        table.is_total()
    );
    Ok(())
}
