// Real-world: moby#4395. The result channel of a started goroutine is
// abandoned when the caller takes the timeout path, so the send blocks
// forever.
// Expected: deadlock
package main

import "fmt"
import "time"

func run(f func() Error) chan Error {
	ch := make(chan Error)
	go func() {
		ch <- f()
	}()
	return ch
}

func main() {
	run(func() Error {
		return nil
	})
	<-time.After(100)
	fmt.Println("timed out")
}
