//! The five box mechanisms side by side.

use blackbox::boxkit::{
    concat, fsm_box, make_stochastic_box, make_trap_box, make_turing_box, MooreTable, TrapMode,
    TuringProgram, WhiteBoxDof,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut alternator = fsm_box(MooreTable::alternator(), 0)?;
    println!("fsm alternator   {}", alternator.run(8));

    let mut counter = make_turing_box(TuringProgram::binary_counter(), 3)?;
    println!("turing counter   {}", counter.run(8));
    println!("  budget exhaustions: {:?}", counter.budget_exhaustions());

    // A Turing machine emulating the alternator emits the same stream.
    let emulated = TuringProgram::from_moore(&MooreTable::alternator(), 0);
    println!("turing emulation {}", make_turing_box(emulated, 1)?.run(8));

    let mut coin = make_stochastic_box(&[0.3, 0.9], 7)?;
    println!("stochastic       {}", coin.run(8));

    for mode in [TrapMode::Random, TrapMode::Correlated] {
        let mut trap = make_trap_box(3, 2, mode, 11)?;
        println!("trap {:<11} {}", format!("{mode:?}"), trap.run(8));
    }

    let dof = WhiteBoxDof::new(MooreTable::constant("1".parse()?), 0)?;
    let mut joined = concat(fsm_box(MooreTable::alternator(), 0)?, dof);
    println!("composite        {}", joined.run(8));
    Ok(())
}
