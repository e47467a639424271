// Real-world: the repaired form of moby#4395; the caller receives the
// result the started goroutine sends.
// Expected: no deadlock
package main

func run(f func() Error) chan Error {
	ch := make(chan Error)
	go func() {
		ch <- f()
	}()
	return ch
}

func main() {
	err := run(func() Error {
		return nil
	})

	<-err
}
