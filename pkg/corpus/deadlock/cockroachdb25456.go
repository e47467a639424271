// Real-world: cockroachdb#25456. The worker and the stopper wait on each
// other's channels in opposite orders; neither operation can complete.
// Expected: deadlock
package main

import "fmt"

func worker(tasks chan int, done chan bool) {
	fmt.Println(<-tasks)
	done <- true
}

func main() {
	tasks := make(chan int)
	done := make(chan bool)
	go worker(tasks, done)
	<-done
	tasks <- 1
}
