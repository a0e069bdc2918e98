from base_pc import RunConfig, BasePC, CvConfig, make
import tqdm
run = BasePC(RunConfig(max_iterations=8, cv=CvConfig(folds=8)), make('franke'))

record = run.reset()

try:
    for _ in tqdm.tqdm(range(run.cfg.max_iterations)):
        record = run.step()
except KeyboardInterrupt:
    pass

print(record)
